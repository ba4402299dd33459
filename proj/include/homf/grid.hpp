#ifndef HOMF_GRID_HPP
#define HOMF_GRID_HPP

#include <cmath>
#include <cstdint>

#include "homf/errors.hpp"

namespace homf {

// Uniform 1D sampling axis: points are exactly start + k*step, k = 0..n-1.
struct Grid1D {
    double start = 0.0;
    double step = 0.0;
    int n = 0;

    double point(int k) const { return start + k * step; }
    double stop() const { return start + (n - 1) * step; }
    double span() const { return (n - 1) * step; }

    // Symmetric axis of n points centered on `center`, reaching +-half_width.
    static Grid1D centered(double center, double half_width, int n) {
        if (n < 2) fail(errc::invalid_params, "grid needs at least 2 points");
        if (half_width <= 0) fail(errc::invalid_params, "half_width must be > 0");
        const double step = 2.0 * half_width / (n - 1);
        return Grid1D{center - half_width, step, n};
    }
};

// Uniform rectangular 2D grid. Axis 1 indexes the first argument of a joint
// amplitude, axis 2 the second. Uniformity is required by the Fourier
// transform in spectra::to_temporal.
struct Grid2D {
    double start1 = 0.0, start2 = 0.0;
    double step1 = 0.0, step2 = 0.0;
    int n1 = 0, n2 = 0;

    double axis1(int k) const { return start1 + k * step1; }
    double axis2(int k) const { return start2 + k * step2; }
    double cell_area() const { return step1 * step2; }

    Grid1D axis1_grid() const { return Grid1D{start1, step1, n1}; }
    Grid1D axis2_grid() const { return Grid1D{start2, step2, n2}; }

    void validate() const {
        if (n1 < 2 || n2 < 2) fail(errc::invalid_params, "grid needs n >= 2 per axis");
        if (!(step1 > 0) || !(step2 > 0))
            fail(errc::invalid_params, "grid steps must be > 0");
    }

    // True when the two axes coincide, so that the transpose (w1,w2)->(w2,w1)
    // maps grid points to grid points.
    bool exchange_compatible() const {
        if (n1 != n2) return false;
        const double scale = std::abs(step1) + std::abs(start1) + 1.0;
        return std::abs(start1 - start2) <= 1e-12 * scale &&
               std::abs(step1 - step2) <= 1e-12 * scale;
    }

    // Square grid with identical axes spanning [lo, hi] with n points each.
    static Grid2D square(double lo, double hi, int n) {
        if (n < 2) fail(errc::invalid_params, "grid needs at least 2 points");
        if (!(hi > lo)) fail(errc::invalid_params, "grid needs hi > lo");
        const double step = (hi - lo) / (n - 1);
        return Grid2D{lo, lo, step, step, n, n};
    }

    static Grid2D from_axes(const Grid1D& a1, const Grid1D& a2) {
        return Grid2D{a1.start, a2.start, a1.step, a2.step, a1.n, a2.n};
    }
};

}  // namespace homf

#endif
