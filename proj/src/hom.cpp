#include "homf/hom.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace homf::hom {

using spectra::complexd;

namespace {

constexpr double kProbabilityClip = 1e-8;
constexpr double kDegenerateEps = 1e-12;

// Treat V within 1e-9 of 1 as perfect visibility; the closed forms reach
// V = 1 only up to rounding when evaluated from equal-parameter states.
constexpr double kUnitVisibilityTol = 1e-9;

double golden_section_maximize(double lo, double hi, double tol,
                               const auto& f) {
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double interference_overlap(const JointAmplitude& jsa, double tau_minus) {
    if (jsa.domain() != spectra::Domain::frequency)
        fail(errc::invalid_params, "interference overlap needs a frequency-domain JSA");
    if (!jsa.grid().exchange_compatible())
        fail(errc::incompatible_grid, "axes cannot be exchanged exactly");
    jsa.require_normalized();

    const Grid2D& g = jsa.grid();
    const int n = g.n1;
    // exp(-2i(w_i - w_j) tau) factorizes into u_i * conj(u_j).
    Eigen::VectorXcd u(n);
    for (int i = 0; i < n; ++i) {
        const double phase = -2.0 * g.axis1(i) * tau_minus;
        u(i) = complexd(std::cos(phase), std::sin(phase));
    }
    complexd acc(0.0, 0.0);
    const auto& v = jsa.values();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            acc += v(i, j) * std::conj(v(j, i)) * u(i) * std::conj(u(j));
    return acc.real() * g.cell_area();
}

double coincidence_probability(const JointAmplitude& jsa, double tau_minus,
                               const BeamsplitterConfig& bs) {
    bs.validate();
    const double eta = bs.eta;
    const double overlap = interference_overlap(jsa, tau_minus);
    double p = eta * eta + (1.0 - eta) * (1.0 - eta) -
               2.0 * eta * (1.0 - eta) * overlap;
    if (p < -kProbabilityClip || p > 1.0 + kProbabilityClip)
        fail(errc::probability_out_of_range,
             "quadrature probability " + std::to_string(p) + " outside [0,1]");
    return std::clamp(p, 0.0, 1.0);
}

double coincidence_probability_gaussian(const GaussianJsaParams& p, double tau_minus) {
    return coincidence_probability_gaussian(p, tau_minus, 0.5);
}

double coincidence_probability_gaussian(const GaussianJsaParams& p, double tau_minus,
                                        double eta) {
    if (!(eta >= 0.0 && eta <= 1.0))
        fail(errc::invalid_params, "reflectance must lie in [0, 1]");
    const HomDip dip = hom_dip(p);
    const double x = tau_minus * tau_minus / (2.0 * dip.width * dip.width);
    const double overlap = dip.visibility * std::exp(-x);
    return eta * eta + (1.0 - eta) * (1.0 - eta) -
           2.0 * eta * (1.0 - eta) * overlap;
}

HomDip hom_dip(const GaussianJsaParams& p) {
    p.validate();
    const double b1 = p.bw1 * p.bw1;
    const double b2 = p.bw2 * p.bw2;
    const double det = b1 * b2 - p.cov * p.cov;
    if (!(det > 0.0))
        fail(errc::degenerate_sigma, "|cov| = bw1*bw2 makes Sigma singular");

    HomDip dip;
    dip.width = 0.25 * std::sqrt((b1 + b2 + 2.0 * p.cov) / det);
    const double sum = b1 + b2;
    const double gap = p.mean1 - p.mean2;
    dip.visibility = 2.0 * std::sqrt(det / (sum * sum - 4.0 * p.cov * p.cov)) *
                     std::exp(-gap * gap / (2.0 * (sum - 2.0 * p.cov)));
    dip.baseline = 0.5;
    return dip;
}

double visibility_overlap(const JointAmplitude& jsa) {
    return interference_overlap(jsa, 0.0);
}

double cfi_from_dip(const HomDip& dip, double tau_minus) {
    const double t2 = dip.width * dip.width;
    const double v = dip.visibility;
    const double x = tau_minus * tau_minus / (2.0 * t2);
    if (tau_minus == 0.0)
        return v >= 1.0 - kUnitVisibilityTol ? 1.0 / t2 : 0.0;

    const double e = std::exp(-x);
    // 1 - V e^{-x} via expm1 when V = 1; the direct form cancels
    // catastrophically for tau << T.
    const double denom =
        v >= 1.0 - kUnitVisibilityTol ? -std::expm1(-x) : 1.0 - v * e;
    if (!(denom > 0.0)) return 0.0;
    return (x * v * v * e * e / denom) / t2;
}

double cfi_gaussian(const GaussianJsaParams& p, double tau_minus) {
    return cfi_from_dip(hom_dip(p), tau_minus);
}

double cfi_numeric(const JointAmplitude& jsa, double tau_minus,
                   const BeamsplitterConfig& bs, double h, CfiForm form) {
    if (!(h > 0.0)) fail(errc::invalid_params, "finite-difference step must be > 0");
    const double p = coincidence_probability(jsa, tau_minus, bs);
    if (p < kDegenerateEps || p > 1.0 - kDegenerateEps)
        fail(errc::degenerate_probability,
             "P_c pinned at " + std::to_string(p) + "; Fisher summand diverges");
    const double pp = coincidence_probability(jsa, tau_minus + h, bs);
    const double pm = coincidence_probability(jsa, tau_minus - h, bs);
    const double dp = (pp - pm) / (2.0 * h);
    double f = dp * dp / p;
    if (form == CfiForm::binary) f += dp * dp / (1.0 - p);
    return f;
}

ZeroDelayCfi cfi_zero_delay(const JointAmplitude& jsa) {
    if (jsa.domain() != spectra::Domain::frequency)
        fail(errc::invalid_params, "cfi_zero_delay needs a frequency-domain JSA");
    if (!jsa.grid().exchange_compatible())
        fail(errc::incompatible_grid, "axes cannot be exchanged exactly");
    jsa.require_normalized();

    const Grid2D& g = jsa.grid();
    const auto& v = jsa.values();
    complexd acc(0.0, 0.0);
    for (int i = 0; i < g.n1; ++i) {
        const double wi = g.axis1(i);
        for (int j = 0; j < g.n2; ++j) {
            const double d = wi - g.axis2(j);
            acc += d * d * v(i, j) * std::conj(v(j, i));
        }
    }
    ZeroDelayCfi out;
    out.value = 4.0 * acc.real() * g.cell_area();
    out.non_physical = out.value < 0.0;
    return out;
}

double optimal_operating_delay(const HomDip& dip) {
    if (!(dip.visibility > 0.0) || dip.visibility > 1.0 + kUnitVisibilityTol)
        fail(errc::invalid_params, "visibility must lie in (0, 1]");
    if (dip.visibility >= 1.0 - kUnitVisibilityTol) return 0.0;
    const double t = dip.width;
    return golden_section_maximize(0.0, 10.0 * t, t * 1e-6, [&](double tau) {
        return cfi_from_dip(dip, tau);
    });
}

std::vector<CfiEtaPoint> cfi_vs_eta(const JointAmplitude& jsa, double tau_minus,
                                    const std::vector<double>& eta_grid,
                                    double h) {
    // The interference overlap does not depend on eta, so the probability at
    // each eta is assembled from three overlap evaluations.
    const double o0 = interference_overlap(jsa, tau_minus);
    const double op = interference_overlap(jsa, tau_minus + h);
    const double om = interference_overlap(jsa, tau_minus - h);

    std::vector<CfiEtaPoint> out;
    out.reserve(eta_grid.size());
    for (double eta : eta_grid) {
        if (!(eta > 0.0 && eta < 1.0))
            fail(errc::invalid_params, "eta grid must lie strictly inside (0, 1)");
        const double base = eta * eta + (1.0 - eta) * (1.0 - eta);
        const double mix = 2.0 * eta * (1.0 - eta);
        const double p = std::clamp(base - mix * o0, 0.0, 1.0);
        const double dp = -mix * (op - om) / (2.0 * h);
        double f = 0.0;
        if (p > kDegenerateEps && p < 1.0 - kDegenerateEps)
            f = dp * dp * (1.0 / p + 1.0 / (1.0 - p));
        out.push_back({eta, f});
    }
    return out;
}

}  // namespace homf::hom
