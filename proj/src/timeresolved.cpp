#include "homf/timeresolved.hpp"

#include <cmath>
#include <numbers>

namespace homf::timeresolved {

namespace {

constexpr double kMaskFloor = 1e-14;
constexpr double kMaskedFractionLimit = 0.01;

// Coefficient of the same-port (bunched) term in p1/p2. Fixed by POVM
// completeness: with it, p0 + int p1 + int p2 + int p12 = 1 identically in
// theta, eta and tau_minus, and at theta = 1 the slow-limit Fisher matrix
// reproduces the binary-outcome HOM information.
double bunch_coefficient(const DetectorConfig& det) {
    return 0.5 * det.eta * (1.0 - det.eta) * det.theta * det.theta;
}

JointAmplitude shifted_amplitude(const JointAmplitude& jta, double tau_minus) {
    if (jta.domain() != spectra::Domain::time)
        fail(errc::invalid_params, "expected a time-domain amplitude");
    if (!jta.grid().exchange_compatible())
        fail(errc::incompatible_grid, "time grid axes cannot be exchanged exactly");
    if (tau_minus == 0.0) return jta;
    return spectra::fourier_shift(jta, tau_minus, -tau_minus);
}

double photon_duration(const JointAmplitude& jta) {
    const auto am = spectra::axis_moments(jta);
    return std::hypot(am.rms1, am.rms2);
}

// K(d, a) = exp(-(t_a + T_d - center)^2 / (2 tau^2)) for the nested
// quadrature of the exact forms.
Eigen::MatrixXd window_matrix(const Grid1D& detection, const Grid1D& time,
                              double center, double tau) {
    Eigen::MatrixXd k(detection.n, time.n);
    const double inv = 1.0 / (2.0 * tau * tau);
    for (int d = 0; d < detection.n; ++d) {
        const double td = detection.point(d) - center;
        for (int a = 0; a < time.n; ++a) {
            const double x = time.point(a) + td;
            k(d, a) = std::exp(-x * x * inv);
        }
    }
    return k;
}

struct ClassParts {
    Eigen::VectorXd single1;  // one-photon part of p1 (no interference)
    Eigen::VectorXd single2;  // one-photon part of p2
    Eigen::VectorXd bunch;    // shared same-port term
    Eigen::MatrixXd p12;
};

ClickDistribution assemble(const DetectorConfig& det, const Grid1D& grid,
                           ClassParts parts) {
    ClickDistribution out;
    out.p0 = (1.0 - det.theta) * (1.0 - det.theta);
    out.time_grid = grid;
    out.p1 = parts.single1 + parts.bunch;
    out.p2 = parts.single2 + parts.bunch;
    out.p12 = std::move(parts.p12);
    return out;
}

}  // namespace

void DetectorConfig::validate() const {
    if (!(theta >= 0.0 && theta <= 1.0))
        fail(errc::invalid_params, "efficiency must lie in [0, 1]");
    if (!(tau_res > 0.0)) fail(errc::invalid_params, "tau_res must be > 0");
    if (!(tau_e >= 0.0)) fail(errc::invalid_params, "tau_e must be >= 0");
    if (!(eta >= 0.0 && eta <= 1.0))
        fail(errc::invalid_params, "reflectance must lie in [0, 1]");
}

InterferenceKernels interference_kernels(const JointAmplitude& jta,
                                         double tau_minus, double eta) {
    jta.require_normalized();
    const JointAmplitude a = shifted_amplitude(jta, tau_minus);
    const auto& v = a.values();
    const double da = a.grid().cell_area();
    const int n = a.grid().n1;

    InterferenceKernels k;
    k.n0 = jta.norm_squared();
    double bunch = 0.0, coinc = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto x = v(i, j);
            const auto y = v(j, i);
            bunch += std::norm(x + y);
            coinc += std::norm(eta * x - (1.0 - eta) * y);
        }
    k.bunch = bunch * da;
    k.coinc = coinc * da;
    return k;
}

double hom_kernel(const JointAmplitude& jta, double tau_minus, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0))
        fail(errc::invalid_params, "reflectance must lie in [0, 1]");
    return interference_kernels(jta, tau_minus, eta).coinc;
}

Grid1D default_detection_grid(double tau_plus, const DetectorConfig& det, int n) {
    det.validate();
    return Grid1D::centered(tau_plus, 6.0 * det.effective_resolution(), n);
}

ClickDistribution click_distribution_slow(const JointAmplitude& jta,
                                          double tau_minus, double tau_plus,
                                          const DetectorConfig& det) {
    return click_distribution_slow(jta, tau_minus, tau_plus, det,
                                   default_detection_grid(tau_plus, det));
}

ClickDistribution click_distribution_slow(const JointAmplitude& jta,
                                          double tau_minus, double tau_plus,
                                          const DetectorConfig& det,
                                          const Grid1D& grid) {
    det.validate();
    jta.require_normalized();
    const double tau = det.effective_resolution();
    if (photon_duration(jta) > tau / 5.0)
        fail(errc::limit_invalid,
             "photon duration exceeds effective resolution / 5; use the exact form");

    const InterferenceKernels k = interference_kernels(jta, tau_minus, det.eta);
    const double theta = det.theta;
    const double eta = det.eta;
    const double norm1 = 1.0 / std::sqrt(2.0 * std::numbers::pi * tau * tau);
    const double inv = 1.0 / (2.0 * tau * tau);
    const double c3 = bunch_coefficient(det);

    auto gauss = [&](double x, double center) {
        const double d = x - center;
        return std::exp(-d * d * inv);
    };

    ClassParts parts;
    parts.single1.resize(grid.n);
    parts.single2.resize(grid.n);
    parts.bunch.resize(grid.n);
    const double tau1 = tau_plus + tau_minus;
    const double tau2 = tau_plus - tau_minus;
    for (int d = 0; d < grid.n; ++d) {
        const double td = grid.point(d);
        const double g2 = gauss(td, tau2);   // input-2 photon window
        const double g1 = gauss(td, tau1);   // input-1 photon window
        const double g0 = gauss(td, tau_plus);
        parts.single1(d) =
            theta * (1.0 - theta) * norm1 * k.n0 * ((1.0 - eta) * g2 + eta * g1);
        parts.single2(d) =
            theta * (1.0 - theta) * norm1 * k.n0 * (eta * g2 + (1.0 - eta) * g1);
        parts.bunch(d) = c3 * norm1 * k.bunch * g0;
    }

    parts.p12.resize(grid.n, grid.n);
    const double c12 = theta * theta * k.coinc * norm1 * norm1;
    for (int d = 0; d < grid.n; ++d) {
        const double gd = gauss(grid.point(d), tau_plus);
        for (int e = 0; e < grid.n; ++e)
            parts.p12(d, e) = c12 * gd * gauss(grid.point(e), tau_plus);
    }
    return assemble(det, grid, std::move(parts));
}

ClickDistribution click_distribution_exact(const JointAmplitude& jta,
                                           double tau_minus, double tau_plus,
                                           const DetectorConfig& det) {
    return click_distribution_exact(jta, tau_minus, tau_plus, det,
                                    default_detection_grid(tau_plus, det));
}

ClickDistribution click_distribution_exact(const JointAmplitude& jta,
                                           double tau_minus, double tau_plus,
                                           const DetectorConfig& det,
                                           const Grid1D& grid) {
    det.validate();
    jta.require_normalized();
    const double tau = det.effective_resolution();
    const Grid1D taxis = jta.grid().axis1_grid();
    if (grid.step > tau / 4.0 || taxis.step > tau / 4.0)
        fail(errc::grid_too_coarse,
             "detection window narrower than 4 grid steps");

    const JointAmplitude a = shifted_amplitude(jta, tau_minus);
    const auto& av = a.values();
    const auto& jv = jta.values();
    const int n = taxis.n;
    const double dt = taxis.step;

    // Densities entering each class, as functions on the temporal grid.
    Eigen::VectorXd marg_first(n), marg_second(n), marg_bunch(n);
    Eigen::MatrixXd w12(n, n);
    for (int i = 0; i < n; ++i) {
        double mf = 0.0, mb = 0.0;
        for (int j = 0; j < n; ++j) {
            mf += std::norm(jv(i, j));
            mb += std::norm(av(i, j) + av(j, i));
            w12(i, j) = std::norm(det.eta * av(i, j) - (1.0 - det.eta) * av(j, i));
        }
        marg_first(i) = mf * dt;
        marg_bunch(i) = mb * dt;
    }
    for (int j = 0; j < n; ++j) {
        double ms = 0.0;
        for (int i = 0; i < n; ++i) ms += std::norm(jv(i, j));
        marg_second(j) = ms * dt;
    }

    const double theta = det.theta;
    const double eta = det.eta;
    const double norm1 = 1.0 / std::sqrt(2.0 * std::numbers::pi * tau * tau);
    const double c3 = bunch_coefficient(det);
    const double tau1 = tau_plus + tau_minus;
    const double tau2 = tau_plus - tau_minus;

    // K matrices against the three window centers. The window argument is
    // (t + T_D - center): a correlation with the flipped marginal.
    const Eigen::MatrixXd k2 = window_matrix(grid, taxis, tau2, tau);
    const Eigen::MatrixXd k1 = window_matrix(grid, taxis, tau1, tau);
    const Eigen::MatrixXd k0 = window_matrix(grid, taxis, tau_plus, tau);

    ClassParts parts;
    // The remaining quadrature over the windowed time variable carries dt.
    const Eigen::VectorXd conv2 = dt * (k2 * marg_second);  // |jta(t',t)|^2 branch
    const Eigen::VectorXd conv1 = dt * (k1 * marg_first);   // |jta(t,t')|^2 branch
    const Eigen::VectorXd convb = dt * (k0 * marg_bunch);
    parts.single1 = theta * (1.0 - theta) * norm1 *
                    ((1.0 - eta) * conv2 + eta * conv1);
    parts.single2 = theta * (1.0 - theta) * norm1 *
                    (eta * conv2 + (1.0 - eta) * conv1);
    parts.bunch = c3 * norm1 * convb;

    parts.p12 = (theta * theta * norm1 * norm1 * dt * dt) *
                (k0 * w12 * k0.transpose());
    return assemble(det, grid, std::move(parts));
}

TimeResolvedCfiReport cfi_matrix_timeresolved(const JointAmplitude& jta,
                                              double tau_minus, double tau_plus,
                                              const DetectorConfig& det,
                                              const TimeResolvedCfiOptions& opts) {
    det.validate();
    const double tau = det.effective_resolution();
    const double h_plus = opts.fd_plus > 0.0 ? opts.fd_plus : tau / 200.0;
    const double h_minus =
        opts.fd_minus > 0.0
            ? opts.fd_minus
            : (opts.dip_width > 0.0 ? opts.dip_width / 200.0 : tau / 200.0);

    // The grid is pinned at the central tau_plus so the finite differences
    // see moving densities on fixed bins, not a moving grid.
    const Grid1D grid =
        Grid1D::centered(tau_plus, 6.0 * tau, opts.grid_points);
    auto build = [&](double tp, double tm) {
        return opts.use_exact
                   ? click_distribution_exact(jta, tm, tp, det, grid)
                   : click_distribution_slow(jta, tm, tp, det, grid);
    };

    const ClickDistribution center = build(tau_plus, tau_minus);
    const ClickDistribution pp = build(tau_plus + h_plus, tau_minus);
    const ClickDistribution pm = build(tau_plus - h_plus, tau_minus);
    const ClickDistribution mp = build(tau_plus, tau_minus + h_minus);
    const ClickDistribution mm = build(tau_plus, tau_minus - h_minus);

    TimeResolvedCfiReport report;
    double masked_weight = 0.0, total_weight = 0.0;

    // Accumulates sum over bins of (d_i p)(d_j p)/p for one outcome class.
    auto accumulate = [&](const auto& p, const auto& dplus, const auto& dminus,
                          double weight, FisherMatrix& out) {
        for (int idx = 0; idx < p.size(); ++idx) {
            const double pc = p(idx);
            const double dp = dplus(idx);
            const double dm = dminus(idx);
            const double w = (std::abs(dp) + std::abs(dm)) * weight;
            total_weight += w;
            if (pc < kMaskFloor) {
                masked_weight += w;
                continue;
            }
            out.f_pp += weight * dp * dp / pc;
            out.f_mm += weight * dm * dm / pc;
            out.f_pm += weight * dp * dm / pc;
        }
    };

    const double dt = grid.step;
    {
        const Eigen::VectorXd dplus = (pp.p1 - pm.p1) / (2.0 * h_plus);
        const Eigen::VectorXd dminus = (mp.p1 - mm.p1) / (2.0 * h_minus);
        accumulate(center.p1, dplus, dminus, dt, report.from_p1);
    }
    {
        const Eigen::VectorXd dplus = (pp.p2 - pm.p2) / (2.0 * h_plus);
        const Eigen::VectorXd dminus = (mp.p2 - mm.p2) / (2.0 * h_minus);
        accumulate(center.p2, dplus, dminus, dt, report.from_p2);
    }
    {
        const Eigen::MatrixXd dplus = (pp.p12 - pm.p12) / (2.0 * h_plus);
        const Eigen::MatrixXd dminus = (mp.p12 - mm.p12) / (2.0 * h_minus);
        accumulate(center.p12.reshaped(), dplus.reshaped(), dminus.reshaped(),
                   dt * dt, report.from_p12);
    }
    // p0 = (1-theta)^2 carries no delay dependence; its summand is zero.

    if (total_weight > 0.0 &&
        masked_weight > kMaskedFractionLimit * total_weight)
        fail(errc::degenerate_probability,
             "more than 1% of the derivative weight sits on masked bins");

    report.masked_fraction =
        total_weight > 0.0 ? masked_weight / total_weight : 0.0;
    report.total.f_pp =
        report.from_p1.f_pp + report.from_p2.f_pp + report.from_p12.f_pp;
    report.total.f_mm =
        report.from_p1.f_mm + report.from_p2.f_mm + report.from_p12.f_mm;
    report.total.f_pm =
        report.from_p1.f_pm + report.from_p2.f_pm + report.from_p12.f_pm;
    return report;
}

}  // namespace homf::timeresolved
