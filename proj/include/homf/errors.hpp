#ifndef HOMF_ERRORS_HPP
#define HOMF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace homf {

// Failure modes surfaced by the library. Split into two categories so the
// CLI can map them to distinct exit codes: bad input (validation) versus a
// numerical limit of the requested computation.
enum class errc {
    invalid_params,            // parameter fails a basic invariant
    invalid_moments,           // Cauchy-Schwarz |cov| <= bw1*bw2 violated
    grid_too_coarse,           // step too large to resolve the state
    grid_too_narrow,           // boundary intensity not negligible
    not_normalized,            // discrete norm deviates from 1
    incompatible_grid,         // axes cannot be exchanged exactly
    aliasing,                  // transform/shift pushed support off-grid
    singular_partner,          // Schur complement needs a nonzero diagonal
    zero_information,          // Fisher information is zero, bound infinite
    degenerate_sigma,          // spectral covariance matrix is singular
    degenerate_probability,    // outcome probability pinned at 0 or 1
    limit_invalid,             // slow-detector approximation out of range
    probability_out_of_range,  // quadrature result far outside [0,1]
    io_error,                  // file or stream failure
};

inline bool is_validation_error(errc c) {
    return c == errc::invalid_params || c == errc::invalid_moments ||
           c == errc::io_error;
}

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::invalid_params: return "InvalidParams";
        case errc::invalid_moments: return "InvalidMoments";
        case errc::grid_too_coarse: return "GridTooCoarse";
        case errc::grid_too_narrow: return "GridTooNarrow";
        case errc::not_normalized: return "NotNormalized";
        case errc::incompatible_grid: return "IncompatibleGrid";
        case errc::aliasing: return "Aliasing";
        case errc::singular_partner: return "SingularPartner";
        case errc::zero_information: return "ZeroInformation";
        case errc::degenerate_sigma: return "DegenerateSigma";
        case errc::degenerate_probability: return "DegenerateProbability";
        case errc::limit_invalid: return "LimitInvalid";
        case errc::probability_out_of_range: return "ProbabilityOutOfRange";
        case errc::io_error: return "IoError";
    }
    return "UnknownError";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what),
          code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
    throw error(code, what);
}

}  // namespace homf

#endif
