#include "homf/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace homf::spectra {

namespace {

constexpr double kBoundaryIntensityTol = 1e-6;

// Unitary DFT factor between a uniform axis `from` and its conjugate axis
// `to`: M(j,k) = c * exp(sign * i * to_j * from_k), c = sqrt(dfrom*dto/2pi).
// Exact unitarity requires dfrom * dto = 2*pi / n, which holds for the
// conjugate grids built in to_temporal and fourier_shift.
MatrixXcd dft_factor(const Grid1D& from, const Grid1D& to, double sign) {
    const double c = std::sqrt(from.step * to.step / (2.0 * std::numbers::pi));
    MatrixXcd m(to.n, from.n);
    for (int j = 0; j < to.n; ++j) {
        const double tj = to.point(j);
        for (int k = 0; k < from.n; ++k) {
            const double phase = sign * tj * from.point(k);
            m(j, k) = complexd(std::cos(phase), std::sin(phase)) * c;
        }
    }
    return m;
}

Grid1D conjugate_axis(const Grid1D& axis) {
    const double dconj = 2.0 * std::numbers::pi / (axis.n * axis.step);
    // Centered on zero; n odd puts 0 exactly on the axis.
    return Grid1D{-0.5 * (axis.n - 1) * dconj, dconj, axis.n};
}

}  // namespace

void GaussianJsaParams::validate() const {
    if (!(bw1 > 0.0) || !(bw2 > 0.0))
        fail(errc::invalid_params, "bandwidths must be > 0");
    if (!std::isfinite(mean1) || !std::isfinite(mean2) || !std::isfinite(cov))
        fail(errc::invalid_params, "parameters must be finite");
    if (!(std::abs(cov) < bw1 * bw2))
        fail(errc::invalid_moments,
             "Cauchy-Schwarz requires |cov| < bw1*bw2 (Sigma must be positive definite)");
}

JointAmplitude::JointAmplitude(Grid2D grid, MatrixXcd values, Domain domain)
    : grid_(grid), values_(std::move(values)), domain_(domain) {
    grid_.validate();
    if (values_.rows() != grid_.n1 || values_.cols() != grid_.n2)
        fail(errc::invalid_params, "value matrix does not match grid shape");
}

double JointAmplitude::norm_squared() const {
    return values_.squaredNorm() * grid_.cell_area();
}

JointAmplitude JointAmplitude::normalized() const {
    const double n2 = norm_squared();
    if (!(n2 > 0.0)) fail(errc::invalid_params, "cannot normalize a zero amplitude");
    JointAmplitude out = *this;
    out.values_ /= std::sqrt(n2);
    return out;
}

double JointAmplitude::boundary_intensity_ratio() const {
    const double peak = values_.cwiseAbs2().maxCoeff();
    if (!(peak > 0.0)) return 0.0;
    double edge = 0.0;
    for (int i = 0; i < grid_.n1; ++i) {
        edge = std::max(edge, std::norm(values_(i, 0)));
        edge = std::max(edge, std::norm(values_(i, grid_.n2 - 1)));
    }
    for (int j = 0; j < grid_.n2; ++j) {
        edge = std::max(edge, std::norm(values_(0, j)));
        edge = std::max(edge, std::norm(values_(grid_.n1 - 1, j)));
    }
    return edge / peak;
}

void JointAmplitude::require_normalized(double tol) const {
    const double n2 = norm_squared();
    if (std::abs(n2 - 1.0) > tol)
        fail(errc::not_normalized,
             "discrete norm is " + std::to_string(n2) + ", expected 1");
}

void JointAmplitude::require_finite() const {
    if (!values_.allFinite())
        fail(errc::invalid_params, "amplitude contains NaN/Inf");
}

Grid2D default_grid(const GaussianJsaParams& p, int n, double pad) {
    p.validate();
    const double bwmax = std::max(p.bw1, p.bw2);
    const double lo = std::min(p.mean1, p.mean2) - pad * bwmax;
    const double hi = std::max(p.mean1, p.mean2) + pad * bwmax;
    return Grid2D::square(lo, hi, n);
}

Grid2D transform_grid(const GaussianJsaParams& p, int n, double pad) {
    p.validate();
    const double bwmax = std::max(p.bw1, p.bw2);
    const double bwmin = std::min(p.bw1, p.bw2);
    const double span = std::abs(p.mean1 - p.mean2) + 2.0 * pad * bwmax;
    // Keep the step under bw/4 on both axes even for unequal bandwidths;
    // n is treated as a minimum and bumped (to an odd count, so t = 0 and the
    // grid center stay on-axis) when the span demands more points.
    int required = static_cast<int>(std::ceil(4.0 * span / bwmin)) + 1;
    if (required % 2 == 0) ++required;
    return default_grid(p, std::max(n, required), pad);
}

JointAmplitude gaussian_jsa(const GaussianJsaParams& params, const Grid2D& grid) {
    params.validate();
    grid.validate();
    if (grid.step1 > params.bw1 / 4.0 || grid.step2 > params.bw2 / 4.0)
        fail(errc::grid_too_coarse, "grid step exceeds bw/4");

    const double det = params.sigma_det();
    // Sigma^-1 = 1/det [[bw2^2, -cov], [-cov, bw1^2]]
    const double a = params.bw2 * params.bw2 / det;
    const double b = -params.cov / det;
    const double c = params.bw1 * params.bw1 / det;

    MatrixXcd values(grid.n1, grid.n2);
    for (int i = 0; i < grid.n1; ++i) {
        const double x = grid.axis1(i) - params.mean1;
        for (int j = 0; j < grid.n2; ++j) {
            const double y = grid.axis2(j) - params.mean2;
            const double q = a * x * x + 2.0 * b * x * y + c * y * y;
            values(i, j) = std::exp(-0.25 * q);
        }
    }

    JointAmplitude ja(grid, std::move(values), Domain::frequency);
    if (ja.boundary_intensity_ratio() > kBoundaryIntensityTol)
        fail(errc::grid_too_narrow,
             "boundary intensity above 1e-6 of peak; truncation would corrupt moments");
    return ja.normalized();
}

SpectralMoments moments(const JointAmplitude& jsa) {
    if (jsa.domain() != Domain::frequency)
        fail(errc::invalid_params, "moments requires a frequency-domain amplitude");
    jsa.require_finite();
    jsa.require_normalized();

    const Grid2D& g = jsa.grid();
    const double da = g.cell_area();
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            const double w = std::norm(jsa.values()(i, j)) * da;
            m1 += w * g.axis1(i);
            m2 += w * g.axis2(j);
        }
    double v1 = 0.0, v2 = 0.0, cv = 0.0;
    for (int i = 0; i < g.n1; ++i) {
        const double x = g.axis1(i) - m1;
        for (int j = 0; j < g.n2; ++j) {
            const double y = g.axis2(j) - m2;
            const double w = std::norm(jsa.values()(i, j)) * da;
            v1 += w * x * x;
            v2 += w * y * y;
            cv += w * x * y;
        }
    }
    SpectralMoments m;
    m.mean1 = m1;
    m.mean2 = m2;
    m.bw1 = std::sqrt(std::max(v1, 0.0));
    m.bw2 = std::sqrt(std::max(v2, 0.0));
    m.cov = cv;
    return m;
}

AxisMoments axis_moments(const JointAmplitude& ja) {
    ja.require_finite();
    const Grid2D& g = ja.grid();
    const double da = g.cell_area();
    const double total = ja.norm_squared();
    if (!(total > 0.0)) fail(errc::invalid_params, "zero amplitude");

    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            const double w = std::norm(ja.values()(i, j)) * da / total;
            m1 += w * g.axis1(i);
            m2 += w * g.axis2(j);
        }
    double v1 = 0.0, v2 = 0.0;
    for (int i = 0; i < g.n1; ++i) {
        const double x = g.axis1(i) - m1;
        for (int j = 0; j < g.n2; ++j) {
            const double y = g.axis2(j) - m2;
            const double w = std::norm(ja.values()(i, j)) * da / total;
            v1 += w * x * x;
            v2 += w * y * y;
        }
    }
    return AxisMoments{m1, m2, std::sqrt(std::max(v1, 0.0)),
                       std::sqrt(std::max(v2, 0.0))};
}

JointAmplitude apply_delays(const JointAmplitude& jsa, double tau1, double tau2) {
    if (jsa.domain() != Domain::frequency)
        fail(errc::invalid_params, "apply_delays requires a frequency-domain amplitude");
    const Grid2D& g = jsa.grid();
    MatrixXcd values = jsa.values();
    for (int i = 0; i < g.n1; ++i) {
        const double p1 = -g.axis1(i) * tau1;
        const complexd e1(std::cos(p1), std::sin(p1));
        for (int j = 0; j < g.n2; ++j) {
            const double p2 = -g.axis2(j) * tau2;
            values(i, j) *= e1 * complexd(std::cos(p2), std::sin(p2));
        }
    }
    return JointAmplitude(g, std::move(values), Domain::frequency);
}

JointAmplitude swap_modes(const JointAmplitude& ja) {
    if (!ja.grid().exchange_compatible())
        fail(errc::incompatible_grid, "axes cannot be exchanged exactly");
    return JointAmplitude(ja.grid(), ja.values().transpose(), ja.domain());
}

JointAmplitude to_temporal(const JointAmplitude& jsa) {
    if (jsa.domain() != Domain::frequency)
        fail(errc::invalid_params, "to_temporal requires a frequency-domain amplitude");
    jsa.require_finite();
    if (jsa.boundary_intensity_ratio() > kBoundaryIntensityTol)
        fail(errc::aliasing, "frequency-domain boundary intensity above 1e-6 of peak");

    const Grid1D w1 = jsa.grid().axis1_grid();
    const Grid1D w2 = jsa.grid().axis2_grid();
    const Grid1D t1 = conjugate_axis(w1);
    const Grid1D t2 = conjugate_axis(w2);

    // jta = F1 * phi * F2^T with F(a,k) = c exp(-i w_k t_a). The unitary
    // factors are rescaled by sqrt(dw/dt) per axis so the output samples the
    // continuum transform (per-axis weight dw/sqrt(2*pi)); with dt*dw = 2*pi/n
    // the Riemann norm sum |values|^2 dt1 dt2 is then preserved exactly.
    const MatrixXcd f1 = dft_factor(w1, t1, -1.0);
    const MatrixXcd f2 = dft_factor(w2, t2, -1.0);
    const double scale = std::sqrt((w1.step / t1.step) * (w2.step / t2.step));
    MatrixXcd out = scale * (f1 * jsa.values() * f2.transpose());

    JointAmplitude jta(Grid2D::from_axes(t1, t2), std::move(out), Domain::time);
    if (jta.boundary_intensity_ratio() > kBoundaryIntensityTol)
        fail(errc::aliasing, "time-domain boundary intensity above 1e-6 of peak");
    return jta;
}

JointAmplitude fourier_shift(const JointAmplitude& ja, double s1, double s2) {
    ja.require_finite();
    const Grid1D a1 = ja.grid().axis1_grid();
    const Grid1D a2 = ja.grid().axis2_grid();
    const Grid1D c1 = conjugate_axis(a1);
    const Grid1D c2 = conjugate_axis(a2);

    // Per-axis shift operator S = F^H diag(exp(+i nu s)) F; a plane wave
    // exp(-i nu0 t) living in bin -nu0 picks up exp(-i nu0 s) as required
    // for f(t) -> f(t + s).
    auto shift_op = [](const Grid1D& axis, const Grid1D& conj, double s) {
        const MatrixXcd f = dft_factor(axis, conj, -1.0);
        Eigen::VectorXcd d(conj.n);
        for (int k = 0; k < conj.n; ++k) {
            const double phase = conj.point(k) * s;
            d(k) = complexd(std::cos(phase), std::sin(phase));
        }
        return MatrixXcd(f.adjoint() * d.asDiagonal() * f);
    };

    MatrixXcd out = ja.values();
    if (s1 != 0.0) out = shift_op(a1, c1, s1) * out;
    if (s2 != 0.0) out = out * shift_op(a2, c2, s2).transpose();

    JointAmplitude shifted(ja.grid(), std::move(out), ja.domain());
    if (shifted.boundary_intensity_ratio() > kBoundaryIntensityTol)
        fail(errc::aliasing, "shift pushed support onto the grid boundary");
    return shifted;
}

}  // namespace homf::spectra
