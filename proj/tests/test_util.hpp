#ifndef HOMF_TEST_UTIL_HPP
#define HOMF_TEST_UTIL_HPP

#include <cmath>

#include "homf/philox.hpp"
#include "homf/spectra.hpp"

namespace testutil {

// Deterministic sampler of valid Gaussian JSA parameters, kept inside the
// region the default 257-point grid resolves comfortably: bandwidth ratio
// within [1/3, 3], normalized covariance within +-0.9, mean gap up to twice
// the larger bandwidth (means symmetric about zero).
class ParamSampler {
public:
    explicit ParamSampler(std::uint64_t seed) : stream_(seed, 0) {}

    homf::spectra::GaussianJsaParams next(bool with_gap = true) {
        homf::spectra::GaussianJsaParams p;
        p.bw1 = 0.5 + 1.5 * stream_.next();
        const double log_ratio = (2.0 * stream_.next() - 1.0) * std::log(3.0);
        p.bw2 = p.bw1 * std::exp(log_ratio);
        const double c = (2.0 * stream_.next() - 1.0) * 0.9;
        p.cov = c * p.bw1 * p.bw2;
        if (with_gap) {
            const double gap = stream_.next() * 2.0 * std::max(p.bw1, p.bw2);
            p.mean1 = -0.5 * gap;
            p.mean2 = 0.5 * gap;
        }
        return p;
    }

    // Equal bandwidths and means: the V = 1 subfamily.
    homf::spectra::GaussianJsaParams next_unit_visibility() {
        homf::spectra::GaussianJsaParams p;
        p.bw1 = p.bw2 = 0.5 + 1.5 * stream_.next();
        const double c = (2.0 * stream_.next() - 1.0) * 0.9;
        p.cov = c * p.bw1 * p.bw2;
        return p;
    }

    double uniform() { return stream_.next(); }

private:
    homf::rng::UniformStream stream_;
};

}  // namespace testutil

#endif
