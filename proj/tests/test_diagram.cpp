#include <doctest.h>

#include <cmath>
#include <vector>

#include "bmfield/diagram.hpp"
#include "bmfield/errors.hpp"
#include "bmfield/hermite.hpp"
#include "bmfield/linalg.hpp"
#include "bmfield/multiindex.hpp"
#include "bmfield/philox.hpp"

#include "isserlis_oracle.hpp"

using namespace bm;

TEST_SUITE_BEGIN("diagram");

namespace {
Mat scalar_rho(double r) {
    Mat rho(1, 1);
    rho(0, 0) = r;
    return rho;
}
}  // namespace

TEST_CASE("bilinear gaussian expectation") {
    CHECK(pair_expectation(MultiIndex({1}), MultiIndex({1}), scalar_rho(0.37)) ==
          doctest::Approx(0.37));
}

TEST_CASE("scalar moments match the pair-partition oracle up to degree 6") {
    for (int q = 1; q <= 6; ++q) {
        for (double r : {-0.9, -0.3, 0.2, 0.8}) {
            const MultiIndex a({q});
            const double diagram = pair_expectation(a, a, scalar_rho(r));
            const double wick = testutil::isserlis_pair_expectation(a, a, scalar_rho(r));
            double factorial_power = 1.0;
            for (int k = 1; k <= q; ++k) factorial_power *= k;
            factorial_power *= std::pow(r, q);
            CHECK(diagram == doctest::Approx(factorial_power).epsilon(1e-12));
            CHECK(diagram == doctest::Approx(wick).epsilon(1e-10));
        }
    }
}

TEST_CASE("two-channel closed forms") {
    Mat rho(2, 2);
    rho(0, 0) = 0.5;
    rho(0, 1) = -0.2;
    rho(1, 0) = 0.3;
    rho(1, 1) = 0.4;
    CHECK(pair_expectation(MultiIndex({1, 1}), MultiIndex({1, 1}), rho) ==
          doctest::Approx(rho(0, 0) * rho(1, 1) + rho(0, 1) * rho(1, 0)).epsilon(1e-14));
    CHECK(pair_expectation(MultiIndex({2, 0}), MultiIndex({0, 2}), rho) ==
          doctest::Approx(2.0 * rho(0, 1) * rho(0, 1)).epsilon(1e-14));
}

TEST_CASE("chaos orthogonality across levels") {
    Mat rho(2, 2);
    rho(0, 0) = 0.9;
    rho(1, 1) = 0.7;
    CHECK(pair_expectation(MultiIndex({2, 1}), MultiIndex({1, 1}), rho) == 0.0);
    CHECK(pair_expectation(MultiIndex({0, 1}), MultiIndex({2, 2}), rho) == 0.0);
}

TEST_CASE("transpose symmetry is exact") {
    CounterRng rng(31, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const Mat rho = testutil::random_feasible_rho(3, rng, std::uint64_t(trial));
        const MultiIndex a({2, 1, 0}), b({1, 1, 1});
        CHECK(pair_expectation(a, b, rho) == pair_expectation(b, a, rho.transposed()));
    }
}

TEST_CASE("oracle equivalence on a random slice") {
    CounterRng rng(33, 0);
    std::uint64_t draw = 0;
    for (int m = 1; m <= 2; ++m) {
        for (int q = 1; q <= 3; ++q) {
            const auto indices = MultiIndex::all_of_order(m, q);
            for (const auto& a : indices) {
                for (const auto& b : indices) {
                    for (int trial = 0; trial < 5; ++trial) {
                        const Mat rho = testutil::random_feasible_rho(m, rng, draw++);
                        const double fast = pair_expectation(a, b, rho);
                        const double slow = testutil::isserlis_pair_expectation(a, b, rho);
                        CHECK(std::abs(fast - slow) <= 1e-9 * std::max(1.0, std::abs(slow)));
                    }
                }
            }
        }
    }
}

TEST_CASE("feasibility screen") {
    Mat ok(2, 2);
    ok(0, 0) = 0.3;
    ok(1, 1) = 0.3;
    CHECK(is_feasible_cross_covariance(ok));
    Mat bad(2, 2);
    bad(0, 0) = 1.2;
    CHECK_FALSE(is_feasible_cross_covariance(bad));
    // Entries within [-1,1] but jointly infeasible: X1 = Y1 = Y2 forces
    // corr(Y1, Y2) = 1, contradicting independent standard Y components.
    Mat joint(2, 2);
    joint(0, 0) = 1.0;
    joint(0, 1) = 1.0;
    CHECK_FALSE(is_feasible_cross_covariance(joint));
}

TEST_CASE("table budget guard") {
    const MultiIndex a({3, 3, 3, 3});
    Mat rho = Mat::identity(4);
    CHECK_THROWS_AS(pair_expectation(a, a, rho, 50), BudgetExceeded);
}

TEST_CASE("degree and dimension validation") {
    CHECK_THROWS_AS(pair_expectation(MultiIndex({13}), MultiIndex({13}), scalar_rho(0.1)),
                    UnsupportedDegree);
    CHECK_THROWS_AS(pair_expectation(MultiIndex({1, 1}), MultiIndex({2}), scalar_rho(0.1)),
                    DimensionMismatch);
}

TEST_CASE("merged level polynomial equals the term-by-term sum") {
    CounterRng rng(35, 0);
    std::vector<ChaosTerm> level;
    level.push_back({MultiIndex({2, 0}), 0.7});
    level.push_back({MultiIndex({1, 1}), -0.4});
    level.push_back({MultiIndex({0, 2}), 0.1});
    const CovariancePolynomial poly = level_covariance_polynomial(level, 2);
    for (int trial = 0; trial < 20; ++trial) {
        const Mat rho = testutil::random_feasible_rho(2, rng, std::uint64_t(trial));
        double direct = 0.0;
        for (const auto& ta : level)
            for (const auto& tb : level)
                direct += ta.c * tb.c * pair_expectation(ta.a, tb.a, rho);
        CHECK(poly.eval(rho) == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_SUITE_END();
