#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "bmfield/chaos.hpp"
#include "bmfield/covariance.hpp"
#include "bmfield/errors.hpp"
#include "bmfield/functional.hpp"
#include "bmfield/linalg.hpp"
#include "bmfield/philox.hpp"
#include "bmfield/variance.hpp"

using namespace bm;

TEST_SUITE_BEGIN("variance");

namespace {
struct WhitePipeline {
    CovarianceModel model;
    Functional g;
    ChaosExpansion expansion;
};

WhitePipeline make_pipeline(const CovarianceModel& raw, const Functional& g_raw, int q_max,
                            int order = 64) {
    WhitePipeline pipe;
    std::tie(pipe.model, pipe.g) = whiten(raw, g_raw);
    pipe.expansion =
        chaos_coefficients(pipe.g, pipe.model.m, {.q_max = q_max, .quadrature_order = order});
    return pipe;
}
}  // namespace

TEST_CASE("functional covariance at zero equals the captured mass") {
    for (const char* name : {"product", "hermite"}) {
        const Functional g = make_functional(name, 2);
        const CovarianceModel model = make_covariance("gaussian", 1, 2);
        const auto pipe = make_pipeline(model, g, 4);
        const double at0 =
            functional_covariance(pipe.expansion, pipe.model, std::vector<double>{0.0});
        CHECK(at0 == doctest::Approx(pipe.expansion.captured_mass).epsilon(1e-10));
    }
}

TEST_CASE("scalar second-hermite covariance follows the squared correlation") {
    const auto pipe = make_pipeline(make_covariance("gaussian", 1, 1),
                                    make_functional("hermite", 1, {{"degree", 2}}), 4);
    const FunctionalCovariance cov(pipe.expansion, pipe.model);
    for (double x : {0.0, 0.5, 1.0, 2.5}) {
        CHECK(cov.total(std::vector<double>{x}) ==
              doctest::Approx(2.0 * std::exp(-x * x)).epsilon(1e-10));
    }
}

TEST_CASE("coordinate product covariance combines both channel routes") {
    const auto pipe = make_pipeline(
        make_covariance("spectral:gauss_hermite_pair", 1, 2, {{"freq_points", 4096}}),
        make_functional("product", 2), 4);
    const FunctionalCovariance cov(pipe.expansion, pipe.model);
    for (double x : {0.3, 1.0, 1.9}) {
        const Mat r = eval_r(pipe.model, std::vector<double>{x});
        const double expected = r(0, 0) * r(1, 1) + r(0, 1) * r(1, 0);
        CHECK(cov.total(std::vector<double>{x}) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("monte carlo oracle validates whitening and the lag orientation") {
    const CovarianceModel raw = make_covariance("correlated_gaussian", 1, 2, {{"rho", 0.5}});
    const Functional g_raw = make_functional("product", 2);
    const auto pipe = make_pipeline(raw, g_raw, 4);
    const FunctionalCovariance cov(pipe.expansion, pipe.model);

    CounterRng rng(61, 5);
    for (double x : {0.0, 0.7, 1.5}) {
        // Joint Gaussian of (xi(x), xi(0)) under the *unwhitened* model.
        const Mat r0 = eval_r(raw, std::vector<double>{0.0});
        const Mat rx = eval_r(raw, std::vector<double>{x});
        Mat joint(4, 4);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                joint(i, j) = r0(i, j);
                joint(2 + i, 2 + j) = r0(i, j);
                joint(i, 2 + j) = rx(i, j);
                joint(2 + j, i) = rx(i, j);
            }
        const Mat chol = cholesky_psd(joint);
        // The functional is not centered under the unwhitened law; the chaos
        // covariance describes the centered field, so subtract the mean the
        // whitened expansion reports.
        const double g0 = pipe.expansion.mean;
        const std::size_t samples = 2000000;
        double acc = 0.0, acc_sq = 0.0;
        std::vector<double> z(4, 0.0), corr(4, 0.0);
        for (std::size_t i = 0; i < samples; ++i) {
            const auto [g1, g2] = rng.normal_pair(i, 0);
            const auto [g3, g4] = rng.normal_pair(i, 1);
            z = {g1, g2, g3, g4};
            for (int row = 3; row >= 0; --row) {
                double s = 0.0;
                for (int col = 0; col <= row; ++col) s += chol(row, col) * z[std::size_t(col)];
                corr[std::size_t(row)] = s;
            }
            const double prod =
                (g_raw(std::span<const double>(corr).subspan(0, 2)) - g0) *
                (g_raw(std::span<const double>(corr).subspan(2, 2)) - g0);
            acc += prod;
            acc_sq += prod * prod;
        }
        const double mc = acc / double(samples);
        const double var = acc_sq / double(samples) - mc * mc;
        const double se = std::sqrt(var / double(samples));
        const double predicted = cov.total(std::vector<double>{x});
        CHECK(std::abs(mc - predicted) < 4.0 * se + 1e-12);
    }
}

TEST_CASE("windowed variance shrinks to zero with the window") {
    const auto pipe = make_pipeline(make_covariance("gaussian", 1, 1),
                                    make_functional("hermite", 1, {{"degree", 2}}), 4);
    const double tiny = windowed_variance(pipe.expansion, pipe.model, 0.01);
    CHECK(std::abs(tiny) < 0.1);
}

TEST_CASE("windowed variance of the gaussian example approaches two root pi") {
    const auto pipe = make_pipeline(make_covariance("gaussian", 1, 1),
                                    make_functional("hermite", 1, {{"degree", 2}}), 4);
    const double v_limit_exact = 2.0 * std::sqrt(std::numbers::pi);
    double previous = 0.0;
    for (double s : {5.0, 20.0, 50.0}) {
        const double vs = windowed_variance(pipe.expansion, pipe.model, s);
        CHECK(vs > previous);
        CHECK(vs < v_limit_exact);
        previous = vs;
        // Exact finite-window value: 2 sqrt(pi) erf(2s) - (1 - exp(-4 s^2))/s.
        const double exact = v_limit_exact * std::erf(2.0 * s) -
                             (1.0 - std::exp(-4.0 * s * s)) / s;
        CHECK(vs == doctest::Approx(exact).epsilon(1e-6));
    }
    // Within 1% of the limit at s = 50.
    CHECK(std::abs(previous - v_limit_exact) < 0.01 * v_limit_exact);
}

TEST_CASE("compactly supported covariance reaches its limit with 1/s correction") {
    const auto pipe = make_pipeline(make_covariance("triangular", 1, 1),
                                    make_functional("coordinate", 1), 3, 24);
    const double vs = windowed_variance(pipe.expansion, pipe.model, 10.0);
    // Integral of (1-|x|)+ is 1; first absolute moment is 1/3.
    CHECK(vs == doctest::Approx(1.0 - (1.0 / 3.0) / 20.0).epsilon(1e-6));
}

TEST_CASE("limit variance of the gaussian second-hermite example") {
    const auto pipe = make_pipeline(make_covariance("gaussian", 1, 1),
                                    make_functional("hermite", 1, {{"degree", 2}}), 4);
    const C1Report c1 = check_c1(pipe.model, 2, 8.0, 2049);
    REQUIRE(c1.pass);
    const VarianceReport report =
        limit_variance(pipe.expansion, pipe.model, 8.0, c1, {}, std::vector<double>{5.0, 20.0});
    CHECK(report.rank == 2);
    CHECK(report.total == doctest::Approx(2.0 * std::sqrt(std::numbers::pi)).epsilon(1e-6));
    CHECK(report.per_level.at(2) == doctest::Approx(report.total));
    CHECK(report.windows.size() == 2);
    CHECK(report.windows[0].total < report.windows[1].total);
}

TEST_CASE("limit variance of the rank-one coordinate functional") {
    const auto pipe = make_pipeline(make_covariance("gaussian", 1, 1),
                                    make_functional("coordinate", 1), 3, 24);
    const C1Report c1 = check_c1(pipe.model, 1, 10.0, 2049);
    REQUIRE(c1.pass);
    const VarianceReport report = limit_variance(pipe.expansion, pipe.model, 10.0, c1);
    CHECK(report.total ==
          doctest::Approx(std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-6));
}

TEST_CASE("derived limit variance of the two-channel product example") {
    const auto pipe = make_pipeline(
        make_covariance("spectral:gauss_hermite_pair", 1, 2, {{"freq_points", 4096}}),
        make_functional("product", 2), 4);
    const C1Report c1 = check_c1(pipe.model, 2, 12.0, 2049);
    REQUIRE(c1.pass);
    const VarianceReport report = limit_variance(pipe.expansion, pipe.model, 12.0, c1);
    // integral of r11 r22 + r12^2 dx = (3/8 + 3/8) sqrt(pi)
    CHECK(report.total == doctest::Approx(0.75 * std::sqrt(std::numbers::pi)).epsilon(1e-5));
}

TEST_CASE("per-level variances are nonnegative and tails accounted") {
    const auto pipe =
        make_pipeline(make_covariance("gaussian", 1, 1), make_functional("abs_centered", 1), 8);
    const C1Report c1 = check_c1(pipe.model, 2, 8.0, 1025);
    REQUIRE(c1.pass);
    const VarianceReport report = limit_variance(pipe.expansion, pipe.model, 8.0, c1);
    for (const auto& [q, v] : report.per_level) CHECK(v >= -1e-10);
    CHECK(report.chaos_tail_bound >= 0.0);
    CHECK(report.chaos_tail_bound < 0.05);  // small residual beyond q_max = 8
    CHECK(report.total > 0.0);
}

TEST_CASE("limit variance refuses a failed integrability certificate") {
    const auto pipe = make_pipeline(make_covariance("cauchy", 1, 1, {{"gamma", 0.3}}),
                                    make_functional("coordinate", 1), 3, 24);
    const C1Report c1 = check_c1(pipe.model, 1, 10.0, 513);
    CHECK_FALSE(c1.pass);
    CHECK_THROWS_AS(limit_variance(pipe.expansion, pipe.model, 10.0, c1), ModelError);
}

TEST_CASE("certificate rank must match the expansion") {
    const auto pipe = make_pipeline(make_covariance("gaussian", 1, 1),
                                    make_functional("hermite", 1, {{"degree", 2}}), 4);
    const C1Report c1 = check_c1(pipe.model, 1, 8.0, 513);  // wrong power
    CHECK_THROWS_AS(limit_variance(pipe.expansion, pipe.model, 8.0, c1), ModelError);
}

TEST_CASE("window quadrature is identical across execution modes") {
    const auto pipe = make_pipeline(make_covariance("gaussian", 1, 1),
                                    make_functional("hermite", 1, {{"degree", 2}}), 4);
    BoxQuadratureOptions serial_opts, parallel_opts;
    serial_opts.exec = Exec::Serial;
    parallel_opts.exec = Exec::Parallel;
    CHECK(windowed_variance(pipe.expansion, pipe.model, 20.0, serial_opts) ==
          windowed_variance(pipe.expansion, pipe.model, 20.0, parallel_opts));
}

TEST_CASE("quadrature budget guard") {
    const auto pipe = make_pipeline(make_covariance("gaussian", 1, 1),
                                    make_functional("hermite", 1, {{"degree", 2}}), 4);
    BoxQuadratureOptions opts;
    opts.node_budget = 16;
    CHECK_THROWS_AS(windowed_variance(pipe.expansion, pipe.model, 5.0, opts), BudgetExceeded);
}

TEST_SUITE_END();
