#include "homf/metrology.hpp"

#include <cassert>
#include <cmath>

namespace homf::metrology {

namespace {

// Slack for Cauchy-Schwarz and positive-semidefiniteness checks; grid moments
// can overshoot the boundary by discretization rounding.
constexpr double kBoundarySlack = 1e-9;

void validate_moments(const SpectralMoments& m) {
    if (m.bw1 < 0.0 || m.bw2 < 0.0)
        fail(errc::invalid_params, "bandwidths must be >= 0");
    const double bound = m.bw1 * m.bw2;
    if (std::abs(m.cov) > bound * (1.0 + kBoundarySlack) + kBoundarySlack * 1e-300)
        fail(errc::invalid_moments,
             "Cauchy-Schwarz requires |cov| <= bw1*bw2");
}

}  // namespace

QfiMatrix qfi_matrix(const SpectralMoments& m) {
    validate_moments(m);
    const double b1 = m.bw1 * m.bw1;
    const double b2 = m.bw2 * m.bw2;
    QfiMatrix q;
    q.q_pp = 4.0 * b1 + 4.0 * b2 + 8.0 * m.cov;
    q.q_mm = 4.0 * b1 + 4.0 * b2 - 8.0 * m.cov;
    q.q_pm = 4.0 * b1 - 4.0 * b2;
    // Rounding at the |cov| = bw1*bw2 boundary can leave a tiny negative
    // diagonal; clamp rather than propagate -1e-17 into sqrt later.
    q.q_pp = std::max(q.q_pp, 0.0);
    q.q_mm = std::max(q.q_mm, 0.0);
    return q;
}

EffectiveQfi effective_qfi(const QfiMatrix& q) {
    if (q.q_pp < 0.0 || q.q_mm < 0.0)
        fail(errc::invalid_params, "QFI diagonal entries must be >= 0");
    // A vanishing partner diagonal is reported as singular_partner before the
    // generic definiteness rejection; with q_pm = 0 too, the block-diagonal
    // limit returns the bare diagonal.
    if (q.q_mm == 0.0 && q.q_pm != 0.0)
        fail(errc::singular_partner, "q_mm = 0 with nonzero q_pm");
    if (q.q_pp == 0.0 && q.q_pm != 0.0)
        fail(errc::singular_partner, "q_pp = 0 with nonzero q_pm");
    const double det = q.q_pp * q.q_mm - q.q_pm * q.q_pm;
    if (det < -kBoundarySlack * (q.q_pp * q.q_mm + q.q_pm * q.q_pm + 1.0))
        fail(errc::invalid_params, "QFI matrix must be positive semidefinite");

    EffectiveQfi eff;
    eff.plus = q.q_mm == 0.0 ? q.q_pp : q.q_pp - q.q_pm * q.q_pm / q.q_mm;
    eff.minus = q.q_pp == 0.0 ? q.q_mm : q.q_mm - q.q_pm * q.q_pm / q.q_pp;
    eff.plus = std::max(eff.plus, 0.0);
    eff.minus = std::max(eff.minus, 0.0);
    return eff;
}

EffectiveQfi effective_qfi(const SpectralMoments& m) {
    validate_moments(m);
    const double b1 = m.bw1 * m.bw1;
    const double b2 = m.bw2 * m.bw2;
    const double num = 16.0 * (b1 * b2 - m.cov * m.cov);
    const double den_plus = b1 + b2 - 2.0 * m.cov;
    const double den_minus = b1 + b2 + 2.0 * m.cov;

    const EffectiveQfi schur = effective_qfi(qfi_matrix(m));

    EffectiveQfi eff;
    // The denominator vanishes only at the equal-bandwidth covariance
    // boundary, where the Schur route is the well-defined limit.
    eff.plus = den_plus > 0.0 ? std::max(num / den_plus, 0.0) : schur.plus;
    eff.minus = den_minus > 0.0 ? std::max(num / den_minus, 0.0) : schur.minus;

#ifndef NDEBUG
    const double scale = 16.0 * (b1 + b2) * (b1 + b2);
    assert(std::abs(eff.plus - schur.plus) <= 1e-10 * scale);
    assert(std::abs(eff.minus - schur.minus) <= 1e-10 * scale);
#endif
    return eff;
}

double single_delay_qfi(double bw) {
    if (!(bw > 0.0)) fail(errc::invalid_params, "bandwidth must be > 0");
    return 4.0 * bw * bw;
}

double optimal_covariance(double bw1, double bw2, DelayTarget target) {
    if (!(bw1 > 0.0) || !(bw2 > 0.0))
        fail(errc::invalid_params, "bandwidths must be > 0");
    const double mag = std::min(bw1 * bw1, bw2 * bw2);
    return target == DelayTarget::plus ? mag : -mag;
}

PrecisionBound qcrb(double q_eff, std::uint64_t n) {
    if (q_eff < 0.0) fail(errc::invalid_params, "information must be >= 0");
    if (n < 1) fail(errc::invalid_params, "need at least one trial");
    if (q_eff == 0.0)
        fail(errc::zero_information, "zero Fisher information, bound is infinite");
    PrecisionBound b;
    b.n_trials = n;
    b.variance_bound = 1.0 / (static_cast<double>(n) * q_eff);
    b.std_bound = std::sqrt(b.variance_bound);
    return b;
}

}  // namespace homf::metrology
