#ifndef HOMF_ESTIMATE_HPP
#define HOMF_ESTIMATE_HPP

#include <cstdint>

#include "homf/hom.hpp"

namespace homf::estimate {

using spectra::GaussianJsaParams;

enum class Branch { positive, negative };

// One simulated HOM timing experiment: n_trials photon pairs per experiment,
// repeated n_experiments times. The interferometer operates at
// true_tau_minus + operating_offset, on a declared monotone branch of the
// dip so the even-in-tau probability inverts uniquely.
struct ExperimentConfig {
    GaussianJsaParams params;
    double eta = 0.5;
    double true_tau_minus = 0.0;
    double operating_offset = 0.0;
    std::uint64_t n_trials = 1;
    std::uint64_t n_experiments = 2;
    std::uint64_t rng_seed = 0;
    Branch branch = Branch::positive;

    void validate() const;
    // Coincidence probability at delay tau on this configuration.
    double probability(double tau) const;
    double operating_point() const { return true_tau_minus + operating_offset; }
};

struct MleEstimate {
    double tau = 0.0;            // estimate of the total operating delay
    bool out_of_bracket = false; // clipped to a bracket edge
};

struct EstimationReport {
    double mean_estimate = 0.0;         // mean of tau_minus estimates (s)
    double empirical_variance = 0.0;    // s^2, unbiased over experiments
    double crb_variance = 0.0;          // 1/(n F) at the operating point
    double qcrb_variance = 0.0;         // 1/(n q_eff_minus)
    double efficiency = 0.0;            // crb_variance / empirical_variance
    double out_of_bracket_fraction = 0.0;
    std::uint64_t n_trials = 0;
    std::uint64_t n_experiments = 0;
};

// Coincidence count k ~ Binomial(n_trials, P_c(operating point)), drawn from
// a Philox stream keyed by (rng_seed, experiment_index): deterministic per
// seed and independent of evaluation order.
std::uint64_t simulate_counts(const ExperimentConfig& cfg,
                              std::uint64_t experiment_index = 0);

// Maximum-likelihood delay from a coincidence count: inverts P_c(tau) = k/n
// on the declared branch ([0, 5T] or its mirror) by bisection to T*1e-9.
// Ratios outside the attainable range are clipped to the bracket edge and
// flagged.
MleEstimate mle_tau(std::uint64_t k, const ExperimentConfig& cfg);

// Runs the full simulate + estimate loop and compares the empirical spread
// against both Cramer-Rao bounds.
EstimationReport run_experiment(const ExperimentConfig& cfg);

}  // namespace homf::estimate

#endif
