#ifndef HOMF_FIGURES_HPP
#define HOMF_FIGURES_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace homf::figures {

// Reference curve families as CSV (header row first, '\n' line ends, fixed
// "%.12g" number formatting so identical inputs emit identical bytes).
// Normalization conventions are spelled out in the column names.

// Effective QFIs for both delay combinations, normalized by bw1*bw2, against
// the normalized covariance, for bandwidth ratios 1, 2 and 5.
void write_figure2(std::ostream& os);

// Quantum-limited timing precision for the relative delay against the
// bandwidth ratio (log-spaced), normalized to the single-known-delay bound
// 4*bw1, for normalized covariances {0, -0.2, -0.5, -0.9, -0.99}; includes
// the constant single-delay bound and the numerically-optimized covariance
// envelope.
void write_figure3(std::ostream& os);

// HOM-measurement precision at the optimal operating delay against the
// bandwidth ratio (linear), same covariance family and normalization.
void write_figure5(std::ostream& os);

void write_figure(int which, std::ostream& os);

// Parsed CSV table for the property checks.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const;  // -1 when absent
};

CsvTable parse_csv(std::istream& is);

}  // namespace homf::figures

#endif
