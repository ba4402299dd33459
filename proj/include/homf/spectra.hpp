#ifndef HOMF_SPECTRA_HPP
#define HOMF_SPECTRA_HPP

#include <Eigen/Dense>
#include <complex>

#include "homf/grid.hpp"

namespace homf::spectra {

using complexd = std::complex<double>;
using Eigen::MatrixXcd;

// Parameters of a two-photon Gaussian joint spectral amplitude:
//   phi0(w1,w2) = N exp(-1/4 (w - W)^T Sigma^-1 (w - W))
// with W = (mean1, mean2) and Sigma = [[bw1^2, cov], [cov, bw2^2]].
// Frequencies are angular (rad/s); bw1/bw2 are rms bandwidths of the
// marginal intensities and cov the frequency covariance.
struct GaussianJsaParams {
    double mean1 = 0.0;
    double mean2 = 0.0;
    double bw1 = 1.0;
    double bw2 = 1.0;
    double cov = 0.0;

    // Sigma must be strictly positive definite: bw > 0 and |cov| < bw1*bw2.
    void validate() const;
    double sigma_det() const { return bw1 * bw1 * bw2 * bw2 - cov * cov; }
};

enum class Domain { frequency, time };

// Complex two-photon amplitude sampled on a uniform grid; either a joint
// spectral amplitude (frequency domain, axes in rad/s) or a joint temporal
// amplitude (time domain, axes in seconds). values(i,j) is the amplitude at
// (axis1(i), axis2(j)).
class JointAmplitude {
public:
    JointAmplitude() = default;
    JointAmplitude(Grid2D grid, MatrixXcd values, Domain domain);

    const Grid2D& grid() const { return grid_; }
    const MatrixXcd& values() const { return values_; }
    Domain domain() const { return domain_; }

    // Discrete Riemann norm: sum |values|^2 * step1 * step2.
    double norm_squared() const;

    // Returns a copy rescaled so norm_squared() == 1.
    JointAmplitude normalized() const;

    // Largest |value|^2 on the grid boundary divided by the peak |value|^2.
    double boundary_intensity_ratio() const;

    // Throws not_normalized if the discrete norm deviates from 1 beyond tol.
    void require_normalized(double tol = 1e-6) const;

    // Throws if any value is NaN/Inf.
    void require_finite() const;

private:
    Grid2D grid_;
    MatrixXcd values_;
    Domain domain_ = Domain::frequency;
};

// First and second central moments of a (normalized) joint spectral
// intensity |phi|^2. Bandwidths are rms; cov obeys |cov| <= bw1*bw2.
struct SpectralMoments {
    double mean1 = 0.0;
    double mean2 = 0.0;
    double bw1 = 0.0;
    double bw2 = 0.0;
    double cov = 0.0;
};

// Per-axis centroid and rms extent of |values|^2 in either domain.
struct AxisMoments {
    double mean1 = 0.0, mean2 = 0.0;
    double rms1 = 0.0, rms2 = 0.0;
};

// Default square frequency grid for a Gaussian JSA: identical axes covering
// both mean frequencies padded by `pad` times the larger bandwidth. The
// shared axes keep the grid exchange-compatible for interference integrals.
Grid2D default_grid(const GaussianJsaParams& p, int n = 257, double pad = 6.0);

// Wider variant for work that round-trips through the time domain: the time
// step is 2*pi / (frequency span), so resolving the photon wavepackets in
// time requires a broad frequency window.
Grid2D transform_grid(const GaussianJsaParams& p, int n = 257, double pad = 25.0);

// Samples the Gaussian JSA on `grid` and renormalizes on the grid, so the
// discrete norm is exactly 1 regardless of truncation. Fails with
// grid_too_coarse when step > bw/4 on either axis, and with grid_too_narrow
// when the boundary intensity exceeds 1e-6 of the peak.
JointAmplitude gaussian_jsa(const GaussianJsaParams& params, const Grid2D& grid);

// Moments of a normalized frequency-domain amplitude by Riemann sums.
SpectralMoments moments(const JointAmplitude& jsa);

// Centroid/rms per axis, valid in either domain (normalizes internally).
AxisMoments axis_moments(const JointAmplitude& ja);

// Delay evolution phi -> phi * exp(-i w1 tau1 - i w2 tau2). Pure phase:
// |values| and all moments are unchanged.
JointAmplitude apply_delays(const JointAmplitude& jsa, double tau1, double tau2);

// Mode reflection phi(w1,w2) -> phi(w2,w1). Requires an exchange-compatible
// grid; no interpolation is ever performed.
JointAmplitude swap_modes(const JointAmplitude& ja);

// 2D Fourier transform to the joint temporal amplitude,
//   jta(t,t') = 1/(2*pi) integral phi(w,w') exp(-i w t - i w' t') dw dw',
// evaluated on the conjugate time grid (time step 2*pi/(n*step), centered on
// t = 0). The discrete transform is exactly unitary, so the norm is
// preserved to rounding. Fails with `aliasing` when the boundary intensity
// exceeds 1e-6 of the peak in either domain.
JointAmplitude to_temporal(const JointAmplitude& jsa);

// Samples of ja(x + s1, y + s2) on the original grid, computed by a
// round trip through the conjugate grid (exact for amplitudes whose
// conjugate-domain content lies inside the principal band, as produced by
// to_temporal from natural-unit states). Fails with `aliasing` when the
// shift pushes support onto the grid boundary.
JointAmplitude fourier_shift(const JointAmplitude& ja, double s1, double s2);

}  // namespace homf::spectra

#endif
