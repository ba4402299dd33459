#include <doctest.h>

#include <cmath>
#include <numbers>

#include "homf/spectra.hpp"
#include "test_util.hpp"

using namespace homf;
using namespace homf::spectra;

namespace {

GaussianJsaParams make_params(double bw1, double bw2, double cov,
                              double mean1 = 0.0, double mean2 = 0.0) {
    GaussianJsaParams p;
    p.mean1 = mean1;
    p.mean2 = mean2;
    p.bw1 = bw1;
    p.bw2 = bw2;
    p.cov = cov;
    return p;
}

}  // namespace

TEST_CASE("gaussian_jsa: standard symmetric case") {
    const auto p = make_params(1.0, 1.0, 0.0);
    const auto jsa = gaussian_jsa(p, Grid2D::square(-6.0, 6.0, 241));

    CHECK(jsa.norm_squared() == doctest::Approx(1.0).epsilon(1e-9));

    // Peak at the origin.
    int imax = 0, jmax = 0;
    double best = 0.0;
    for (int i = 0; i < 241; ++i)
        for (int j = 0; j < 241; ++j)
            if (std::abs(jsa.values()(i, j)) > best) {
                best = std::abs(jsa.values()(i, j));
                imax = i;
                jmax = j;
            }
    CHECK(jsa.grid().axis1(imax) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(jsa.grid().axis2(jmax) == doctest::Approx(0.0).epsilon(1e-12));

    // Real positive amplitudes.
    CHECK(jsa.values()(120, 120).imag() == 0.0);
    CHECK(jsa.values()(120, 120).real() > 0.0);

    const auto m = moments(jsa);
    CHECK(m.bw1 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(m.bw2 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(m.cov) < 1e-6);
}

TEST_CASE("gaussian_jsa: moments round trip with covariance") {
    const auto p = make_params(1.0, 2.0, -1.0);
    const auto jsa = gaussian_jsa(p, default_grid(p));
    const auto m = moments(jsa);
    CHECK(m.cov == doctest::Approx(-1.0).epsilon(1e-5));
    CHECK(m.bw1 == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(m.bw2 == doctest::Approx(2.0).epsilon(1e-5));

    const auto p2 = make_params(1.0, 1.0, 0.5);
    const auto m2 = moments(gaussian_jsa(p2, default_grid(p2)));
    CHECK(m2.cov == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("gaussian_jsa: parameter round trip over random states") {
    testutil::ParamSampler sampler(17);
    for (int trial = 0; trial < 30; ++trial) {
        const auto p = sampler.next();
        const auto m = moments(gaussian_jsa(p, default_grid(p)));
        const double scale = std::max(p.bw1, p.bw2);
        CHECK(std::abs(m.mean1 - p.mean1) < 1e-5 * scale);
        CHECK(std::abs(m.mean2 - p.mean2) < 1e-5 * scale);
        CHECK(std::abs(m.bw1 - p.bw1) < 1e-5 * p.bw1);
        CHECK(std::abs(m.bw2 - p.bw2) < 1e-5 * p.bw2);
        CHECK(std::abs(m.cov - p.cov) < 1e-5 * scale * scale);
    }
}

TEST_CASE("gaussian_jsa: grid validation errors") {
    const auto p = make_params(1.0, 1.0, 0.0);
    // step = 12/40 = 0.3 > bw/4
    CHECK_THROWS_WITH_AS((void)gaussian_jsa(p, Grid2D::square(-6.0, 6.0, 41)),
                         doctest::Contains("GridTooCoarse"), error);
    // boundary at 3 bandwidths: |phi|^2 = e^-4.5 of peak
    CHECK_THROWS_WITH_AS((void)gaussian_jsa(p, Grid2D::square(-3.0, 3.0, 101)),
                         doctest::Contains("GridTooNarrow"), error);
}

TEST_CASE("gaussian_jsa: parameter validation") {
    CHECK_THROWS_AS((void)gaussian_jsa(make_params(-1.0, 1.0, 0.0),
                                       Grid2D::square(-6, 6, 129)),
                    error);
    // |cov| = bw1*bw2 exactly: Sigma singular.
    CHECK_THROWS_WITH_AS((void)gaussian_jsa(make_params(1.0, 1.0, 1.0),
                                            Grid2D::square(-6, 6, 129)),
                         doctest::Contains("Cauchy-Schwarz"), error);
}

TEST_CASE("moments: separable amplitude has zero covariance") {
    // Product state f(w1) g(w2) with distinct widths and centers, built
    // directly rather than through gaussian_jsa.
    const Grid2D g = Grid2D::square(-8.0, 8.0, 201);
    MatrixXcd values(g.n1, g.n2);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            const double x = g.axis1(i) - 0.4;
            const double y = g.axis2(j) + 0.7;
            values(i, j) = std::exp(-x * x / 4.0) * std::exp(-y * y / 2.56);
        }
    const auto jsa = JointAmplitude(g, values, Domain::frequency).normalized();
    CHECK(std::abs(moments(jsa).cov) < 1e-9);
}

TEST_CASE("moments: rejects unnormalized input") {
    const auto p = make_params(1.0, 1.0, 0.0);
    auto jsa = gaussian_jsa(p, default_grid(p));
    JointAmplitude scaled(jsa.grid(), jsa.values() * 1.01, jsa.domain());
    CHECK_THROWS_WITH_AS((void)moments(scaled), doctest::Contains("NotNormalized"),
                         error);
}

TEST_CASE("moments: Cauchy-Schwarz holds for random normalized amplitudes") {
    testutil::ParamSampler sampler(99);
    const Grid2D g = Grid2D::square(-6.0, 6.0, 61);
    for (int trial = 0; trial < 20; ++trial) {
        MatrixXcd values(g.n1, g.n2);
        for (int i = 0; i < g.n1; ++i)
            for (int j = 0; j < g.n2; ++j) {
                // random complex noise under a Gaussian envelope
                const double x = g.axis1(i), y = g.axis2(j);
                const double env = std::exp(-(x * x + y * y) / 8.0);
                values(i, j) = complexd(sampler.uniform() - 0.5,
                                        sampler.uniform() - 0.5) *
                               env;
            }
        const auto ja = JointAmplitude(g, values, Domain::frequency).normalized();
        const auto m = moments(ja);
        CHECK(std::abs(m.cov) <= m.bw1 * m.bw2 + 1e-9);
    }
}

TEST_CASE("apply_delays: identity and unitarity") {
    const auto p = make_params(1.0, 1.5, 0.8);
    const auto jsa = gaussian_jsa(p, default_grid(p));

    const auto same = apply_delays(jsa, 0.0, 0.0);
    CHECK((same.values() - jsa.values()).cwiseAbs().maxCoeff() == 0.0);

    const auto delayed = apply_delays(jsa, 0.37, -1.24);
    CHECK(std::abs(delayed.norm_squared() - 1.0) < 1e-12);
    double max_mag_diff = 0.0;
    for (int i = 0; i < jsa.grid().n1; ++i)
        for (int j = 0; j < jsa.grid().n2; ++j)
            max_mag_diff = std::max(max_mag_diff,
                                    std::abs(std::abs(delayed.values()(i, j)) -
                                             std::abs(jsa.values()(i, j))));
    CHECK(max_mag_diff < 1e-14);

    const auto m0 = moments(jsa);
    const auto m1 = moments(delayed);
    CHECK(std::abs(m0.bw1 - m1.bw1) < 1e-9);
    CHECK(std::abs(m0.bw2 - m1.bw2) < 1e-9);
    CHECK(std::abs(m0.cov - m1.cov) < 1e-9);
}

TEST_CASE("swap_modes: fixed point, involution, axis exchange") {
    const auto sym = make_params(1.0, 1.0, -0.4);
    const auto jsa_sym = gaussian_jsa(sym, default_grid(sym));
    const auto swapped = swap_modes(jsa_sym);
    CHECK((swapped.values() - jsa_sym.values()).cwiseAbs().maxCoeff() < 1e-12);

    const auto p = make_params(1.0, 2.0, 0.3, -0.5, 0.8);
    const auto jsa = gaussian_jsa(p, default_grid(p));
    const auto twice = swap_modes(swap_modes(jsa));
    CHECK((twice.values() - jsa.values()).cwiseAbs().maxCoeff() == 0.0);

    const auto m = moments(swap_modes(jsa));
    CHECK(m.bw1 == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(m.bw2 == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(m.mean1 == doctest::Approx(0.8).epsilon(1e-6));
    CHECK(m.cov == doctest::Approx(0.3).epsilon(1e-4));
}

TEST_CASE("swap_modes: incompatible grid is rejected") {
    Grid2D g;
    g.start1 = -6.0;
    g.start2 = -5.0;  // shifted second axis
    g.step1 = g.step2 = 0.1;
    g.n1 = g.n2 = 121;
    MatrixXcd values = MatrixXcd::Ones(121, 121);
    const JointAmplitude ja(g, values, Domain::frequency);
    CHECK_THROWS_WITH_AS((void)swap_modes(ja), doctest::Contains("IncompatibleGrid"),
                         error);
}

TEST_CASE("to_temporal: Fourier pair widths, peak value, Parseval") {
    const auto p = make_params(1.0, 1.0, 0.0);
    const auto jsa = gaussian_jsa(p, transform_grid(p));
    const auto jta = to_temporal(jsa);

    CHECK(jta.domain() == Domain::time);
    CHECK(std::abs(jta.norm_squared() - 1.0) < 1e-6);   // Parseval bound
    CHECK(std::abs(jta.norm_squared() - 1.0) < 1e-12);  // exact in practice

    // rms-width-1 Gaussian amplitude transforms to rms temporal width 1/2
    const auto am = axis_moments(jta);
    CHECK(am.rms1 == doctest::Approx(0.5).epsilon(0.01));
    CHECK(am.rms2 == doctest::Approx(0.5).epsilon(0.01));

    // |jta(0,0)| = sqrt(2/pi) for this state
    const int mid1 = (jta.grid().n1 - 1) / 2;
    const int mid2 = (jta.grid().n2 - 1) / 2;
    CHECK(jta.grid().axis1(mid1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(jta.values()(mid1, mid2)) ==
          doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-9));
}

TEST_CASE("to_temporal: delay shift theorem") {
    const auto p = make_params(1.0, 1.0, -0.3);
    const auto jsa = gaussian_jsa(p, transform_grid(p));
    const double tau1 = 0.4, tau2 = -0.25;
    const auto jta = to_temporal(apply_delays(jsa, tau1, tau2));

    // exp(-i w tau) evolution moves the temporal centroid to -tau with this
    // transform kernel.
    const auto am = axis_moments(jta);
    const double step = jta.grid().step1;
    CHECK(std::abs(am.mean1 - (-tau1)) < step);
    CHECK(std::abs(am.mean2 - (-tau2)) < step);
    // and well within a step in practice
    CHECK(std::abs(am.mean1 + tau1) < 1e-9);
    CHECK(std::abs(am.mean2 + tau2) < 1e-9);
}

TEST_CASE("to_temporal: hot boundary raises Aliasing") {
    const Grid2D g = Grid2D::square(-6.0, 6.0, 65);
    const JointAmplitude flat(g, MatrixXcd::Ones(65, 65), Domain::frequency);
    CHECK_THROWS_WITH_AS((void)to_temporal(flat.normalized()),
                         doctest::Contains("Aliasing"), error);
}

TEST_CASE("fourier_shift: exact on-grid and sub-grid shifts") {
    const auto p = make_params(1.0, 1.0, 0.0);
    const auto jta = to_temporal(gaussian_jsa(p, transform_grid(p)));
    const double dt = jta.grid().step1;

    // Integer-step shift must reproduce the index-shifted array (interior).
    const auto shifted = fourier_shift(jta, 3.0 * dt, 0.0);
    double worst = 0.0;
    for (int i = 0; i < jta.grid().n1 - 3; ++i)
        for (int j = 0; j < jta.grid().n2; ++j)
            worst = std::max(worst,
                             std::abs(shifted.values()(i, j) - jta.values()(i + 3, j)));
    CHECK(worst < 1e-10);

    // Sub-grid shift against the analytic Gaussian jta(t,t') =
    // sqrt(2/pi) exp(-t^2 - t'^2).
    const double s1 = 0.37 * dt, s2 = -1.73 * dt;
    const auto sub = fourier_shift(jta, s1, s2);
    const double amp = std::sqrt(2.0 / std::numbers::pi);
    worst = 0.0;
    for (int i = 60; i < jta.grid().n1 - 60; i += 7)
        for (int j = 60; j < jta.grid().n2 - 60; j += 7) {
            const double t1 = jta.grid().axis1(i) + s1;
            const double t2 = jta.grid().axis2(j) + s2;
            const double expect = amp * std::exp(-t1 * t1 - t2 * t2);
            worst = std::max(worst, std::abs(sub.values()(i, j) - expect));
        }
    CHECK(worst < 1e-9);
    CHECK(std::abs(sub.norm_squared() - 1.0) < 1e-9);

    // A shift of half the time span pushes support onto the boundary.
    const double half_span = 0.5 * jta.grid().axis1_grid().span();
    CHECK_THROWS_WITH_AS((void)fourier_shift(jta, half_span, 0.0),
                         doctest::Contains("Aliasing"), error);
}

TEST_CASE("axis_moments handles both domains") {
    const auto p = make_params(1.0, 2.0, 0.0, 0.3, -0.6);
    const auto jsa = gaussian_jsa(p, default_grid(p));
    const auto am = axis_moments(jsa);
    CHECK(am.mean1 == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(am.mean2 == doctest::Approx(-0.6).epsilon(1e-6));
    CHECK(am.rms1 == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(am.rms2 == doctest::Approx(2.0).epsilon(1e-5));
}
