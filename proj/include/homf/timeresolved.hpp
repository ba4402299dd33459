#ifndef HOMF_TIMERESOLVED_HPP
#define HOMF_TIMERESOLVED_HPP

#include <Eigen/Dense>

#include "homf/spectra.hpp"

namespace homf::timeresolved {

using spectra::JointAmplitude;

// Time-resolving detector pair behind the beamsplitter. The intrinsic
// resolution tau_res and electronic response tau_e combine into a single
// effective Gaussian resolution sqrt(tau_res^2 + tau_e^2); every formula
// below uses only that combination.
struct DetectorConfig {
    double theta = 1.0;    // per-detector efficiency in [0, 1]
    double tau_res = 1.0;  // intrinsic time resolution (s), > 0
    double tau_e = 0.0;    // electronic response time (s), >= 0
    double eta = 0.5;      // beamsplitter intensity reflectance

    double effective_resolution() const { return std::hypot(tau_res, tau_e); }
    void validate() const;
};

// The four time-resolved outcome classes: no click (p0), a click at one
// detector only (densities p1, p2 over the detection-time axis), and a
// coincidence (density p12 over the detection-time plane). Densities are
// probability per second (per second^2 for p12); the Riemann masses plus p0
// sum to 1.
struct ClickDistribution {
    double p0 = 0.0;
    Grid1D time_grid;     // shared axis for T_D and T_D'
    Eigen::VectorXd p1;   // s^-1
    Eigen::VectorXd p2;   // s^-1
    Eigen::MatrixXd p12;  // s^-2, indexed (T_D, T_D')

    double mass_p1() const { return p1.sum() * time_grid.step; }
    double mass_p2() const { return p2.sum() * time_grid.step; }
    double mass_p12() const { return p12.sum() * time_grid.step * time_grid.step; }
    double total() const { return p0 + mass_p1() + mass_p2() + mass_p12(); }
};

// Overlap integrals of the tau-shifted temporal amplitude
// A(t,t') = jta(t + tau, t' - tau) with its transpose:
//   n0    = integral |jta|^2            (should be 1)
//   bunch = integral |A + A^T|^2        (same-port pair, = 2 (1 + overlap))
//   coinc = integral |eta A - (1-eta) A^T|^2   (the HOM kernel H(tau))
struct InterferenceKernels {
    double n0 = 0.0;
    double bunch = 0.0;
    double coinc = 0.0;
};

InterferenceKernels interference_kernels(const JointAmplitude& jta,
                                         double tau_minus, double eta);

// H(tau_minus) by time-domain quadrature; sub-grid shifts are applied by
// Fourier shift, exact for band-limited grids. Equals the frequency-domain
// coincidence probability of hom:: for the same state.
double hom_kernel(const JointAmplitude& jta, double tau_minus, double eta);

// Default detection-time axis: 129 points spanning +-6 effective
// resolutions around tau_plus.
Grid1D default_detection_grid(double tau_plus, const DetectorConfig& det,
                              int n = 129);

// Slow-detector click probabilities: the detection windows are treated as
// constant over the photon wavepacket, so each density collapses to Gaussian
// bins weighted by the interference kernels. Fails with limit_invalid when
// the photon duration (2D rms extent of |jta|^2) exceeds a fifth of the
// effective resolution.
ClickDistribution click_distribution_slow(const JointAmplitude& jta,
                                          double tau_minus, double tau_plus,
                                          const DetectorConfig& det);
ClickDistribution click_distribution_slow(const JointAmplitude& jta,
                                          double tau_minus, double tau_plus,
                                          const DetectorConfig& det,
                                          const Grid1D& grid);

// Full convolution form: Gaussian detection windows integrated against the
// delayed temporal amplitude by nested quadrature (separable, so two 1D
// convolutions per class).
ClickDistribution click_distribution_exact(const JointAmplitude& jta,
                                           double tau_minus, double tau_plus,
                                           const DetectorConfig& det);
ClickDistribution click_distribution_exact(const JointAmplitude& jta,
                                           double tau_minus, double tau_plus,
                                           const DetectorConfig& det,
                                           const Grid1D& grid);

// 2x2 classical Fisher information matrix in (tau_plus, tau_minus).
struct FisherMatrix {
    double f_pp = 0.0;
    double f_mm = 0.0;
    double f_pm = 0.0;
};

struct TimeResolvedCfiOptions {
    double fd_plus = 0.0;   // finite-difference step in tau_plus; 0 -> tau_eff/200
    double fd_minus = 0.0;  // step in tau_minus; 0 -> dip_width/200 (or tau_eff/200)
    double dip_width = 0.0; // HOM dip width of the state, if known
    bool use_exact = false; // slow-detector forms by default
    int grid_points = 129;
};

struct TimeResolvedCfiReport {
    FisherMatrix total;
    FisherMatrix from_p1;
    FisherMatrix from_p2;
    FisherMatrix from_p12;
    double masked_fraction = 0.0;  // |dp| weight on bins below the floor
};

// Multiparameter CFI from the four outcome classes by central finite
// differences on a detection grid held fixed across the stencil. Bins with
// density below 1e-14 are excluded; if they carry more than 1% of the
// derivative weight the distribution is degenerate there and an error is
// raised.
TimeResolvedCfiReport cfi_matrix_timeresolved(const JointAmplitude& jta,
                                              double tau_minus, double tau_plus,
                                              const DetectorConfig& det,
                                              const TimeResolvedCfiOptions& opts = {});

}  // namespace homf::timeresolved

#endif
