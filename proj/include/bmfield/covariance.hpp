#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>

#include "bmfield/functional.hpp"
#include "bmfield/linalg.hpp"
#include "bmfield/parallel.hpp"
#include "bmfield/spectral.hpp"

namespace bm {

// Matrix-valued stationary covariance x -> r(x) in R^{m x m}, with
// r_jk(x) = E[xi_j(x) xi_k(0)]. Joint stationarity forces r(-x) = r(x)^T.
struct CovarianceModel {
    int n = 1;
    int m = 1;
    std::function<void(std::span<const double>, Mat&)> eval;
    bool whitened = false;
    double decay_radius = 10.0;  // user-declared radius of negligible covariance
    std::string id;
};

// r(x) with a finiteness check on the entries.
Mat eval_r(const CovarianceModel& model, std::span<const double> x);

// Linear change of coordinates making r(0) the identity, with the matching
// composition applied to the functional so the law of G(xi(x)) is unchanged.
std::pair<CovarianceModel, Functional> whiten(const CovarianceModel& model,
                                              const Functional& g);

// max over rows / columns of the absolute entry sums of r(x); dominates every
// |r_jk(x)| and equals 1 at x = 0 for whitened models.
double max_abs_row_col_sum(const CovarianceModel& model, std::span<const double> x);

struct C1Report {
    int d = 0;                    // covariance power that must be integrable
    double box_radius = 0.0;      // truncation radius R
    int resolution = 0;           // trapezoid points per axis
    Mat pair_integrals;           // integral over the box of |r_jk|^d
    double majorant_integral = 0; // integral over the box of the row/col majorant^d
    double boundary_max = 0.0;    // max |r| entry sampled on the box boundary
    double tail_estimate = 0.0;   // boundary majorant^d times box measure (heuristic)
    bool pass = false;
};

// Numeric certificate of the integrability condition on a truncated box. The
// covariance power d is the Hermite rank of the target functional; pass
// requires finite integrals and |r| below 1e-6 on the boundary.
C1Report check_c1(const CovarianceModel& model, int d, double box_radius,
                  int grid_resolution = 1025, Exec exec = Exec::Parallel);

std::string c1_report_to_json(const C1Report& report);

// Registry. Kinds: gaussian, exponential, triangular, cauchy,
// correlated_gaussian, spectral:<spectral kind>. Per-channel length scales via
// "scales" in params_list, other scalars via params.
CovarianceModel make_covariance(const std::string& kind, int n, int m,
                                const std::map<std::string, double>& params = {},
                                const std::map<std::string, std::vector<double>>& params_list = {});

// Wraps a spectral model: r_jk(x) is the trapezoid Fourier sum of
// alpha_j alpha_k on a frequency grid of `freq_points` per axis.
CovarianceModel covariance_from_spectral(std::shared_ptr<const SpectralModel> spec,
                                         int freq_points = 4096, double decay_radius = 12.0);

}  // namespace bm
