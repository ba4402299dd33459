#ifndef HOMF_HOM_HPP
#define HOMF_HOM_HPP

#include <vector>

#include "homf/spectra.hpp"

namespace homf::hom {

using spectra::GaussianJsaParams;
using spectra::JointAmplitude;

// Beamsplitter with frequency-independent intensity reflectance eta.
// eta = 0.5 maximizes the interference signal and is the default.
struct BeamsplitterConfig {
    double eta = 0.5;

    void validate() const {
        if (!(eta >= 0.0 && eta <= 1.0))
            fail(errc::invalid_params, "reflectance must lie in [0, 1]");
    }
};

// Gaussian-dip summary: P_c(tau) = baseline * (1 - V exp(-tau^2/(2 T^2))).
struct HomDip {
    double visibility = 0.0;  // V in [0, 1]
    double width = 0.0;       // T in seconds
    double baseline = 0.5;    // tau -> infinity coincidence probability
};

// Which classical Fisher information to report for the binary
// coincidence/no-coincidence measurement. The `paper` form keeps only the
// coincidence outcome, F = (dP/dtau)^2 / P; `binary` adds the complementary
// term, F = (dP/dtau)^2 [1/P + 1/(1-P)]. They agree near the dip where
// P << 1; figure reproduction uses `paper`.
enum class CfiForm { paper, binary };

struct ZeroDelayCfi {
    double value = 0.0;
    // Eq (21)'s integrand is not manifestly positive for engineered complex
    // amplitudes; a negative result is flagged instead of clamped.
    bool non_physical = false;
};

struct CfiEtaPoint {
    double eta = 0.0;
    double cfi = 0.0;
};

// Interference overlap Re integral phi(w1,w2) phi*(w2,w1) e^{-2i(w1-w2)tau}
// by grid quadrature. Needs an exchange-compatible grid.
double interference_overlap(const JointAmplitude& jsa, double tau_minus);

// Coincidence probability for a general normalized JSA:
//   P_c = eta^2 + (1-eta)^2 - 2 eta (1-eta) * interference_overlap.
// Quadrature results outside [0,1] by more than 1e-8 are an error; smaller
// excursions are clipped.
double coincidence_probability(const JointAmplitude& jsa, double tau_minus,
                               const BeamsplitterConfig& bs = {});

// Closed form for Gaussian JSAs at eta = 0.5:
//   P_c = 1/2 [1 - V exp(-tau^2/(2 T^2))].
double coincidence_probability_gaussian(const GaussianJsaParams& p, double tau_minus);

// General-eta closed form, used by the Monte Carlo estimator.
double coincidence_probability_gaussian(const GaussianJsaParams& p, double tau_minus,
                                        double eta);

// Dip width T = (1/4) sqrt((bw1^2 + bw2^2 + 2 cov) / (bw1^2 bw2^2 - cov^2))
// and visibility
//   V = 2 sqrt((bw1^2 bw2^2 - cov^2) / ((bw1^2 + bw2^2)^2 - 4 cov^2))
//       * exp(-(mean1 - mean2)^2 / (2 (bw1^2 + bw2^2 - 2 cov))).
HomDip hom_dip(const GaussianJsaParams& p);

// Zero-delay overlap Re integral phi(w1,w2) phi*(w2,w1); equals the dip
// visibility for real amplitudes.
double visibility_overlap(const JointAmplitude& jsa);

// Classical Fisher information of the HOM dip for Gaussian JSAs,
//   F = (1/T^2) (x e^{-2x} V^2 / (1 - V e^{-x})),  x = tau^2/(2 T^2).
// At tau = 0 the limit is returned: 1/T^2 when V = 1, else 0.
double cfi_gaussian(const GaussianJsaParams& p, double tau_minus);

// Same closed form evaluated from a precomputed dip.
double cfi_from_dip(const HomDip& dip, double tau_minus);

// CFI by central finite differences of the grid coincidence probability,
// step h (h = T/1000 is a good default). Fails with degenerate_probability
// when P_c is pinned at 0 or 1 (within 1e-12).
double cfi_numeric(const JointAmplitude& jsa, double tau_minus,
                   const BeamsplitterConfig& bs, double h,
                   CfiForm form = CfiForm::paper);

// Zero-delay CFI, F = 4 integral (w1-w2)^2 phi(w1,w2) phi*(w2,w1).
ZeroDelayCfi cfi_zero_delay(const JointAmplitude& jsa);

// Delay maximizing the closed-form CFI, located by golden-section search on
// [0, 10 T] to T*1e-6. Returns 0 in the V = 1 limit.
double optimal_operating_delay(const HomDip& dip);

// CFI versus beamsplitter reflectance at fixed delay (binary form, so the
// eta -> 0, 1 endpoints stay finite). eta values must lie in (0, 1).
std::vector<CfiEtaPoint> cfi_vs_eta(const JointAmplitude& jsa, double tau_minus,
                                    const std::vector<double>& eta_grid,
                                    double h);

}  // namespace homf::hom

#endif
