#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "bmfield/covariance.hpp"
#include "bmfield/errors.hpp"
#include "bmfield/functional.hpp"
#include "bmfield/linalg.hpp"
#include "bmfield/philox.hpp"
#include "bmfield/spectral.hpp"

using namespace bm;

TEST_SUITE_BEGIN("covariance");

namespace {
std::vector<CovarianceModel> registry_models() {
    std::vector<CovarianceModel> models;
    models.push_back(make_covariance("gaussian", 1, 1));
    models.push_back(make_covariance("exponential", 1, 1));
    models.push_back(make_covariance("triangular", 1, 1));
    models.push_back(make_covariance("cauchy", 1, 1, {{"gamma", 1.2}}));
    models.push_back(make_covariance("correlated_gaussian", 1, 2, {{"rho", 0.5}}));
    models.push_back(make_covariance("spectral:gauss_hermite_pair", 1, 2,
                                     {{"freq_points", 2048}}));
    return models;
}
}  // namespace

TEST_CASE("closed-form evaluations of the scalar gaussian model") {
    const CovarianceModel model = make_covariance("gaussian", 1, 1);
    CHECK(eval_r(model, std::vector<double>{0.0})(0, 0) == doctest::Approx(1.0));
    CHECK(eval_r(model, std::vector<double>{1.0})(0, 0) ==
          doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
}

TEST_CASE("spectral pair model matches its transform closed forms") {
    const CovarianceModel model =
        make_covariance("spectral:gauss_hermite_pair", 1, 2, {{"freq_points", 4096}});
    // r(0) = Id by construction-time whitening.
    const Mat at0 = eval_r(model, std::vector<double>{0.0});
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
            CHECK(at0(j, k) == doctest::Approx(j == k ? 1.0 : 0.0).epsilon(1e-9));
    for (double x : {0.4, 1.0, 2.3}) {
        const Mat r = eval_r(model, std::vector<double>{x});
        const double band = std::exp(-0.5 * x * x);
        CHECK(r(0, 0) == doctest::Approx(band).epsilon(1e-8));
        CHECK(r(0, 1) == doctest::Approx(x * x * band / std::numbers::sqrt2).epsilon(1e-7));
        CHECK(r(1, 1) ==
              doctest::Approx(0.5 * (std::pow(x, 4) - 4.0 * x * x + 2.0) * band).epsilon(1e-7));
    }
}

TEST_CASE("fejer spectral model reproduces the squared sinc covariance") {
    const CovarianceModel model = make_covariance("spectral:fejer", 1, 1,
                                                  {{"cutoff", 3.0}, {"freq_points", 8192}});
    for (double x : {0.5, 1.7, 4.0}) {
        const double u = 3.0 * x / 2.0;
        const double expected = std::pow(std::sin(u) / u, 2);
        CHECK(eval_r(model, std::vector<double>{x})(0, 0) ==
              doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("whitening the scaled scalar model") {
    // r(x) = 4 exp(-x^2): variance 4, so the functional picks up a factor 2.
    const CovarianceModel model = make_covariance(
        "gaussian", 1, 1, {{"amplitude", 4.0}, {"scale", 1.0 / std::numbers::sqrt2}});
    const Functional g = make_functional("coordinate", 1);
    const auto [white, gw] = whiten(model, g);
    CHECK(white.whitened);
    CHECK(eval_r(white, std::vector<double>{0.0})(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eval_r(white, std::vector<double>{0.7})(0, 0) ==
          doctest::Approx(std::exp(-0.49)).epsilon(1e-12));
    CHECK(gw(std::vector<double>{1.5}) == doctest::Approx(3.0).epsilon(1e-12));  // G(2y)
}

TEST_CASE("whitening the correlated pair model") {
    const CovarianceModel model =
        make_covariance("correlated_gaussian", 1, 2, {{"rho", 0.5}});
    const Functional g = make_functional("product", 2);
    const auto [white, gw] = whiten(model, g);
    const Mat at0 = eval_r(white, std::vector<double>{0.0});
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(at0(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));

    // Idempotence: a second application is the identity.
    const auto [white2, gw2] = whiten(white, gw);
    CounterRng rng(41, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto [u, v] = rng.normal_pair(std::uint64_t(trial));
        const Mat a = eval_r(white, std::vector<double>{u});
        const Mat b = eval_r(white2, std::vector<double>{u});
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(std::abs(a(i, j) - b(i, j)) < 1e-12);
        const std::vector<double> point{u, v};
        CHECK(gw(point) == doctest::Approx(gw2(point)).epsilon(1e-12));
    }
}

TEST_CASE("already-whitened models pass through unchanged") {
    const CovarianceModel model = make_covariance("gaussian", 1, 1);
    const Functional g = make_functional("coordinate", 1);
    const auto [white, gw] = whiten(model, g);
    CHECK(white.whitened);
    CHECK(gw(std::vector<double>{0.3}) == g(std::vector<double>{0.3}));
}

TEST_CASE("whitening refuses ill-conditioned variance") {
    const CovarianceModel model =
        make_covariance("correlated_gaussian", 1, 2, {{"rho", 1.0 - 5e-10}});
    CHECK_THROWS_AS(whiten(model, make_functional("product", 2)), ModelError);
}

TEST_CASE("row-column majorant") {
    const CovarianceModel scalar = make_covariance("gaussian", 1, 1);
    CHECK(max_abs_row_col_sum(scalar, std::vector<double>{0.0}) == doctest::Approx(1.0));
    CHECK(max_abs_row_col_sum(scalar, std::vector<double>{1.3}) ==
          doctest::Approx(std::exp(-0.5 * 1.69)));

    // r11 = exp(-x^2), r22 = exp(-2 x^2): at x = 1 the majorant is e^{-1}.
    const CovarianceModel diag = make_covariance(
        "gaussian", 1, 2, {}, {{"scales", {1.0 / std::numbers::sqrt2, 0.5}}});
    CHECK(max_abs_row_col_sum(diag, std::vector<double>{1.0}) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

    // Dominance over every entry.
    CounterRng rng(43, 0);
    for (const auto& model : registry_models()) {
        for (int trial = 0; trial < 10; ++trial) {
            const std::vector<double> x{3.0 * rng.normal(std::uint64_t(trial), 7)};
            const Mat r = eval_r(model, x);
            const double psi = max_abs_row_col_sum(model, x);
            for (int i = 0; i < model.m; ++i)
                for (int j = 0; j < model.m; ++j) CHECK(std::abs(r(i, j)) <= psi + 1e-13);
        }
    }
}

TEST_CASE("reflection compatibility r(-x) = r(x)^T") {
    CounterRng rng(47, 0);
    for (const auto& model : registry_models()) {
        for (int trial = 0; trial < 10; ++trial) {
            const double x = 4.0 * rng.normal(std::uint64_t(trial), 9);
            const Mat fwd = eval_r(model, std::vector<double>{x});
            const Mat bwd = eval_r(model, std::vector<double>{-x});
            for (int i = 0; i < model.m; ++i)
                for (int j = 0; j < model.m; ++j)
                    CHECK(std::abs(fwd(i, j) - bwd(j, i)) < 1e-12);
        }
    }
}

TEST_CASE("gram matrices of sampled point sets stay PSD") {
    CounterRng rng(53, 0);
    std::uint64_t draw = 0;
    for (const auto& model : registry_models()) {
        for (int trial = 0; trial < 50; ++trial) {
            const int k = 2 + int(rng.uniform(draw++, 3) * 5.0);
            std::vector<double> points;
            for (int p = 0; p < k; ++p) points.push_back(4.0 * rng.normal(draw++, 4));
            const int dim = k * model.m;
            Mat gram(dim, dim);
            for (int p = 0; p < k; ++p)
                for (int q = 0; q < k; ++q) {
                    const Mat block =
                        eval_r(model, std::vector<double>{points[std::size_t(p)] -
                                                          points[std::size_t(q)]});
                    for (int i = 0; i < model.m; ++i)
                        for (int j = 0; j < model.m; ++j)
                            gram(p * model.m + i, q * model.m + j) = block(i, j);
                }
            CHECK(min_eigenvalue(gram) >= -1e-8);
        }
    }
}

TEST_CASE("integrability certificate for the gaussian model") {
    const CovarianceModel model = make_covariance("gaussian", 1, 1);
    const C1Report report = check_c1(model, 1, 10.0, 2049);
    CHECK(report.pass);
    CHECK(report.pair_integrals(0, 0) ==
          doctest::Approx(std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-8));
    CHECK(report.boundary_max < 1e-6);
}

TEST_CASE("compactly supported covariance certifies with zero tail") {
    const CovarianceModel model = make_covariance("triangular", 1, 1);
    const C1Report report = check_c1(model, 3, 2.0, 513);
    CHECK(report.pass);
    CHECK(report.boundary_max == 0.0);
    CHECK(report.tail_estimate == 0.0);
}

TEST_CASE("slow power-law decay fails the certificate") {
    const CovarianceModel model = make_covariance("cauchy", 1, 1, {{"gamma", 0.3}});
    const C1Report small = check_c1(model, 1, 10.0, 1025);
    CHECK_FALSE(small.pass);
    CHECK(small.boundary_max > 1e-3);
    // The truncated integral keeps growing with the box: no L^1 limit.
    const C1Report large = check_c1(model, 1, 100.0, 4097);
    CHECK(large.pair_integrals(0, 0) > 2.0 * small.pair_integrals(0, 0));
}

TEST_CASE("certificate validation errors") {
    const CovarianceModel raw =
        make_covariance("correlated_gaussian", 1, 2, {{"rho", 0.5}});
    CHECK_THROWS_AS(check_c1(raw, 1, 5.0, 257), ModelError);  // not whitened
    const CovarianceModel ok = make_covariance("gaussian", 1, 1);
    CHECK_THROWS_AS(check_c1(ok, 0, 5.0, 257), ConfigError);
}

TEST_CASE("spectral amplitudes are even and normalized") {
    const SpectralModel spec = make_spectral("band_pair", {{"t0", 8.0}});
    std::vector<double> plus(2, 0.0), minus(2, 0.0);
    for (double t : {0.3, 1.9, 7.7}) {
        spec.amplitude(std::vector<double>{t}, plus);
        spec.amplitude(std::vector<double>{-t}, minus);
        CHECK(plus[0] == doctest::Approx(minus[0]).epsilon(1e-14));
        CHECK(plus[1] == doctest::Approx(minus[1]).epsilon(1e-14));
    }
    CHECK(spec.tail_mass(0, spec.t_max()) < 1e-8);
    CHECK(spec.tail_mass(1, spec.t_max()) < 1e-8);

    const CovarianceModel cov = covariance_from_spectral(
        std::make_shared<SpectralModel>(spec), 4096, 12.0);
    const Mat at0 = eval_r(cov, std::vector<double>{0.0});
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(at0(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9));
}

TEST_SUITE_END();
