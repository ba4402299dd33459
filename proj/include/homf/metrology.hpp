#ifndef HOMF_METROLOGY_HPP
#define HOMF_METROLOGY_HPP

#include <cstdint>

#include "homf/spectra.hpp"

namespace homf::metrology {

using spectra::SpectralMoments;

// Quantum Fisher information matrix for the delay pair (tau_plus, tau_minus),
// entries in (rad/s)^2. Positive semidefinite by construction from moments.
struct QfiMatrix {
    double q_pp = 0.0;  // mean-delay diagonal
    double q_mm = 0.0;  // relative-delay diagonal
    double q_pm = 0.0;  // off-diagonal; zero iff equal bandwidths
};

// Effective (Schur-complement) QFIs: the attainable information about one
// delay when the other is unknown.
struct EffectiveQfi {
    double plus = 0.0;
    double minus = 0.0;
};

// Cramer-Rao bound for n repeated trials: variance >= 1/(n * information).
struct PrecisionBound {
    double variance_bound = 0.0;  // s^2
    double std_bound = 0.0;       // s
    std::uint64_t n_trials = 1;
};

enum class DelayTarget { plus, minus };

// QFI matrix from spectral moments:
//   q_pp = 4 bw1^2 + 4 bw2^2 + 8 cov
//   q_mm = 4 bw1^2 + 4 bw2^2 - 8 cov
//   q_pm = 4 bw1^2 - 4 bw2^2
// Fails with invalid_moments when |cov| > bw1*bw2 (beyond rounding slack).
QfiMatrix qfi_matrix(const SpectralMoments& m);

// Schur complements of the 2x2 matrix: q_eff_plus = q_pp - q_pm^2/q_mm and
// the mirror. A zero partner diagonal with nonzero q_pm is singular_partner;
// with q_pm = 0 the bare diagonal is returned (block-diagonal limit).
EffectiveQfi effective_qfi(const QfiMatrix& q);

// Closed form straight from the moments,
//   q_eff_(+/-) = 16 (bw1^2 bw2^2 - cov^2) / (bw1^2 + bw2^2 -/+ 2 cov),
// algebraically equal to the Schur route; the two are cross-checked in debug
// builds to 1e-10 relative.
EffectiveQfi effective_qfi(const SpectralMoments& m);

// QFI for one unknown delay with the other known: 4 bw^2.
double single_delay_qfi(double bw);

// Covariance maximizing the effective QFI for the chosen delay:
// +min(bw1^2, bw2^2) for tau_plus, -min(...) for tau_minus. At this value the
// per-trial bound is (1/4) max(1/bw1, 1/bw2).
double optimal_covariance(double bw1, double bw2, DelayTarget target);

// Quantum Cramer-Rao bound; fails with zero_information when q_eff == 0.
PrecisionBound qcrb(double q_eff, std::uint64_t n);

}  // namespace homf::metrology

#endif
