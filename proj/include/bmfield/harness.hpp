#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bmfield/field.hpp"
#include "bmfield/functional.hpp"
#include "bmfield/parallel.hpp"

namespace bm {

// One realization of the normalized window integral
// (2s)^{-n/2} * integral over [-s,s]^n of (G(xi(x)) - g0) dx,
// discretized as a Riemann sum over the sample grid.
struct Observation {
    std::uint64_t seed = 0;
    double s = 0.0;
    double value = 0.0;
};

// Nested-box partial integrals: z[k] uses the box of half-width s * y[k]^{1/n}.
struct PathObservation {
    std::uint64_t seed = 0;
    double s = 0.0;
    std::vector<double> y;
    std::vector<double> z;
};

Observation window_functional(const FieldSample& sample, const Functional& g, double g0,
                              Exec exec = Exec::Parallel);

// All boxes share one pass over the sample. Sites enter the box for level y
// when |x_i| <= s * y^{1/n} + h/2 on every axis (grid-snapping tie rule).
PathObservation window_path(const FieldSample& sample, const Functional& g, double g0,
                            std::span<const double> y_grid, Exec exec = Exec::Parallel);

struct CltOptions {
    std::size_t min_replicates = 500;
    double variance_band_factor = 5.0;  // band is factor * V * sqrt(2/N)
    double ks_level_critical = 1.628;   // 1% asymptotic Kolmogorov quantile
};

struct CltReport {
    std::size_t replicates = 0;
    double target_variance = 0.0;
    double sample_mean = 0.0;
    double sample_variance = 0.0;
    double variance_band = 0.0;
    double ks_statistic = 0.0;
    double ks_critical = 0.0;
    double ks_pvalue = 0.0;
    bool variance_pass = false;
    bool ks_pass = false;
    bool pass = false;
    CltOptions options;
};

// Sample-variance band plus Kolmogorov-Smirnov test against N(0, V).
CltReport clt_test(std::span<const Observation> observations, double target_variance,
                   const CltOptions& options = {});

struct IncrementOptions {
    std::size_t min_replicates = 500;
    double spread_factor = 3.0;  // pass when max ratio <= factor * median ratio
};

struct IncrementReport {
    struct PairStat {
        double y1 = 0.0, y2 = 0.0;
        double ratio = 0.0;  // mean |dZ|^p / |y2-y1|^{p/2}
    };
    double p = 0.0;
    std::vector<PairStat> pairs;
    double max_ratio = 0.0;
    double median_ratio = 0.0;
    double spread = 0.0;
    bool pass = false;
    IncrementOptions options;
};

// Scaled p-th moments of path increments over the given (y1, y2) pairs;
// bounded spread is the finite-sample proxy for the Hoelder-1/2 estimate.
// Degenerate pairs (y1 == y2) are skipped.
IncrementReport increment_test(std::span<const PathObservation> paths, double p,
                               std::span<const std::pair<double, double>> pairs,
                               const Functional& g, const IncrementOptions& options = {});

// Dyadic resolution pairs (k 2^-j, (k+1) 2^-j) for j = 0..levels-1 inside [0,1].
std::vector<std::pair<double, double>> dyadic_pairs(int levels);

}  // namespace bm
