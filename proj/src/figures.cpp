#include "homf/figures.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "homf/hom.hpp"
#include "homf/metrology.hpp"

namespace homf::figures {

namespace {

const std::vector<double> kCovariances = {0.0, -0.2, -0.5, -0.9, -0.99};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

void write_row(std::ostream& os, const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) os << ',';
        os << fmt(values[i]);
    }
    os << '\n';
}

spectra::SpectralMoments moments_for(double bw1, double bw2, double cov) {
    spectra::SpectralMoments m;
    m.bw1 = bw1;
    m.bw2 = bw2;
    m.cov = cov;
    return m;
}

// Numerical optimal-covariance envelope: max of q_eff_minus over a dense
// covariance sweep (the closed form of the optimum is checked against this
// sweep in the tests, but the emitted envelope is the numerical one).
double envelope_qeff_minus(double bw1, double bw2, int sweep_points = 2001) {
    const double bound = bw1 * bw2;
    double best = 0.0;
    for (int k = 0; k < sweep_points; ++k) {
        const double cov = -bound + 2.0 * bound * k / (sweep_points - 1);
        const double det = bw1 * bw1 * bw2 * bw2 - cov * cov;
        if (det <= 0.0) continue;
        best = std::max(best,
                        metrology::effective_qfi(moments_for(bw1, bw2, cov)).minus);
    }
    return best;
}

}  // namespace

void write_figure2(std::ostream& os) {
    const std::vector<double> ratios = {1.0, 2.0, 5.0};
    os << "cov_over_bw1bw2";
    for (double r : ratios) {
        os << ",qeff_minus_over_bw1bw2[bw2/bw1=" << fmt(r) << "]";
        os << ",qeff_plus_over_bw1bw2[bw2/bw1=" << fmt(r) << "]";
    }
    os << '\n';

    const double bw1 = 1.0;
    for (int k = 0; k <= 198; ++k) {
        const double c = (k - 99) / 100.0;  // exact sign symmetry about 0
        std::vector<double> row = {c};
        for (double r : ratios) {
            const double bw2 = bw1 * r;
            const auto eff = metrology::effective_qfi(
                moments_for(bw1, bw2, c * bw1 * bw2));
            row.push_back(eff.minus / (bw1 * bw2));
            row.push_back(eff.plus / (bw1 * bw2));
        }
        write_row(os, row);
    }
}

void write_figure3(std::ostream& os) {
    os << "bw2_over_bw1";
    for (double c : kCovariances)
        os << ",precision_over_4bw1[cov_norm=" << fmt(c) << "]";
    os << ",single_delay_bound_over_4bw1,optimal_cov_envelope_over_4bw1\n";

    const double bw1 = 1.0;
    const int points = 41;
    for (int k = 0; k < points; ++k) {
        const double r = std::pow(10.0, -1.0 + 2.0 * k / (points - 1));
        const double bw2 = bw1 * r;
        std::vector<double> row = {r};
        for (double c : kCovariances) {
            const auto eff =
                metrology::effective_qfi(moments_for(bw1, bw2, c * bw1 * bw2));
            row.push_back(std::sqrt(eff.minus) / (4.0 * bw1));
        }
        row.push_back(1.0);  // per-trial bound 4*bw1 with the partner delay known
        row.push_back(std::sqrt(envelope_qeff_minus(bw1, bw2)) / (4.0 * bw1));
        write_row(os, row);
    }
}

void write_figure5(std::ostream& os) {
    os << "bw2_over_bw1";
    for (double c : kCovariances)
        os << ",hom_precision_over_4bw1[cov_norm=" << fmt(c) << "]";
    os << '\n';

    const double bw1 = 1.0;
    const int points = 81;
    for (int k = 0; k < points; ++k) {
        const double r = 1.0 + 2.0 * k / (points - 1);
        const double bw2 = bw1 * r;
        std::vector<double> row = {r};
        for (double c : kCovariances) {
            spectra::GaussianJsaParams p;
            p.bw1 = bw1;
            p.bw2 = bw2;
            p.cov = c * bw1 * bw2;
            const hom::HomDip dip = hom::hom_dip(p);
            const double tau_star = hom::optimal_operating_delay(dip);
            const double cfi = hom::cfi_from_dip(dip, tau_star);
            row.push_back(std::sqrt(cfi) / (4.0 * bw1));
        }
        write_row(os, row);
    }
}

void write_figure(int which, std::ostream& os) {
    switch (which) {
        case 2: write_figure2(os); return;
        case 3: write_figure3(os); return;
        case 5: write_figure5(os); return;
        default: fail(errc::invalid_params, "figure must be one of 2, 3, 5");
    }
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

CsvTable parse_csv(std::istream& is) {
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        if (first) {
            while (std::getline(ss, cell, ',')) table.header.push_back(cell);
            first = false;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != table.header.size())
            fail(errc::io_error, "CSV row width does not match header");
        table.rows.push_back(std::move(row));
    }
    if (first) fail(errc::io_error, "CSV is missing the header row");
    return table;
}

}  // namespace homf::figures
