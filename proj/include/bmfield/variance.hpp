#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "bmfield/chaos.hpp"
#include "bmfield/covariance.hpp"
#include "bmfield/diagram.hpp"
#include "bmfield/quadrature.hpp"

namespace bm {

// Lag cross-covariance block feeding the pair expectations: X = xi at lag x,
// Y = xi at the origin, so rho(x)_ij = r_ij(x). The integrated variance is
// orientation-free; the pointwise value is pinned to this convention.
Mat cross_covariance_at(const CovarianceModel& model, std::span<const double> x);

// Covariance of the functional field, C_G(x) = sum_q C_{G_q}(x), evaluated
// through pre-merged diagram polynomials per chaos level.
class FunctionalCovariance {
  public:
    FunctionalCovariance(const ChaosExpansion& e, const CovarianceModel& model,
                         std::int64_t table_budget = 10'000'000);

    double total(std::span<const double> x) const;
    double level(int q, std::span<const double> x) const;
    std::vector<int> levels() const;
    const CovarianceModel& model() const { return *model_; }

    double total_from_rho(const Mat& rho) const;
    double level_from_rho(int q, const Mat& rho) const;

  private:
    const CovarianceModel* model_;
    std::map<int, CovariancePolynomial> per_level_;
};

double functional_covariance(const ChaosExpansion& e, const CovarianceModel& model,
                             std::span<const double> x);
double functional_covariance_level(const ChaosExpansion& e, const CovarianceModel& model, int q,
                                   std::span<const double> x);

// Finite-window variance: integral of C_G against the triangular window
// kernel prod_i (1 - |x_i| / (2s)) over [-2s, 2s]^n.
double windowed_variance(const ChaosExpansion& e, const CovarianceModel& model, double s,
                         const BoxQuadratureOptions& opts = {});

struct VarianceReport {
    int rank = 0;
    double box_radius = 0.0;
    std::map<int, double> per_level;   // limit variance per chaos level
    double total = 0.0;                // sum over levels
    double chaos_tail_bound = 0.0;     // residual mass times majorant integral
    double quadrature_tail_note = 0.0; // boundary majorant^d times box measure
    double quadrature_error = 0.0;
    bool quadrature_converged = false;
    struct WindowRow {
        double s = 0.0;
        double total = 0.0;
        std::map<int, double> per_level;
    };
    std::vector<WindowRow> windows;
};

// Limit variance per chaos level over [-R, R]^n plus tail accounting. The
// integrability certificate must have passed for d = rank of the expansion.
VarianceReport limit_variance(const ChaosExpansion& e, const CovarianceModel& model,
                              double box_radius, const C1Report& c1,
                              const BoxQuadratureOptions& opts = {},
                              std::span<const double> window_s = {});

std::string variance_report_to_json(const VarianceReport& report);
std::string variance_windows_to_csv(const VarianceReport& report);

}  // namespace bm
