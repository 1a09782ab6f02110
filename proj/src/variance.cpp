#include "bmfield/variance.hpp"

#include <cmath>

#include "bmfield/errors.hpp"
#include "bmfield/jsonw.hpp"

namespace bm {

Mat cross_covariance_at(const CovarianceModel& model, std::span<const double> x) {
    return eval_r(model, x);
}

FunctionalCovariance::FunctionalCovariance(const ChaosExpansion& e, const CovarianceModel& model,
                                           std::int64_t table_budget)
    : model_(&model) {
    if (e.m != model.m)
        throw DimensionMismatch("functional covariance: expansion and model dimension differ");
    if (!model.whitened)
        throw ModelError("functional covariance: model must be whitened");
    for (const auto& [q, terms] : e.levels) {
        if (q == 0) continue;
        per_level_.emplace(q, level_covariance_polynomial(terms, e.m, table_budget));
    }
}

double FunctionalCovariance::total_from_rho(const Mat& rho) const {
    double sum = 0.0;
    for (const auto& [q, poly] : per_level_) sum += poly.eval(rho);
    return sum;
}

double FunctionalCovariance::level_from_rho(int q, const Mat& rho) const {
    auto it = per_level_.find(q);
    if (it == per_level_.end())
        throw Error("chaos level " + std::to_string(q) + " absent from expansion");
    return it->second.eval(rho);
}

double FunctionalCovariance::total(std::span<const double> x) const {
    return total_from_rho(cross_covariance_at(*model_, x));
}

double FunctionalCovariance::level(int q, std::span<const double> x) const {
    return level_from_rho(q, cross_covariance_at(*model_, x));
}

std::vector<int> FunctionalCovariance::levels() const {
    std::vector<int> out;
    for (const auto& [q, poly] : per_level_) out.push_back(q);
    return out;
}

double functional_covariance(const ChaosExpansion& e, const CovarianceModel& model,
                             std::span<const double> x) {
    return FunctionalCovariance(e, model).total(x);
}

double functional_covariance_level(const ChaosExpansion& e, const CovarianceModel& model, int q,
                                   std::span<const double> x) {
    return FunctionalCovariance(e, model).level(q, x);
}

double windowed_variance(const ChaosExpansion& e, const CovarianceModel& model, double s,
                         const BoxQuadratureOptions& opts) {
    if (s <= 0) throw ConfigError("windowed_variance: s must be positive");
    const FunctionalCovariance cov(e, model);
    const int n = model.n;
    // The window kernel is supported on [-2s, 2s]^n, but beyond the declared
    // decay radius the covariance is negligible; truncating there keeps the
    // grid resolution on the mass.
    const double half = std::min(2.0 * s, std::max(model.decay_radius, 1e-3));
    const auto result = integrate_box(
        n, half,
        [&](std::span<const double> x) {
            double kernel = 1.0;
            for (double xi : x) kernel *= 1.0 - std::abs(xi) / (2.0 * s);
            return cov.total(x) * kernel;
        },
        opts);
    if (!result.converged)
        throw BudgetExceeded("windowed_variance: quadrature budget exceeded before convergence "
                             "(last delta " +
                             JsonWriter::number(result.error_estimate) + ")");
    return result.value;
}

VarianceReport limit_variance(const ChaosExpansion& e, const CovarianceModel& model,
                              double box_radius, const C1Report& c1,
                              const BoxQuadratureOptions& opts,
                              std::span<const double> window_s) {
    const int rank = hermite_rank(e);
    if (c1.d != rank)
        throw ModelError("limit_variance: integrability certificate was computed for d=" +
                         std::to_string(c1.d) + " but the expansion has rank " +
                         std::to_string(rank));
    if (!c1.pass)
        throw ModelError(
            "limit_variance: integrability certificate failed (boundary max " +
            JsonWriter::number(c1.boundary_max) +
            " at radius " + JsonWriter::number(c1.box_radius) +
            "); increase the decay radius or use an integrable model");

    const FunctionalCovariance cov(e, model);
    const auto levels = cov.levels();
    const std::size_t dim = levels.size();

    VarianceReport report;
    report.rank = rank;
    report.box_radius = box_radius;

    const auto limit = integrate_box_vec(
        model.n, box_radius, dim,
        [&](std::span<const double> x, std::span<double> out) {
            const Mat rho = cross_covariance_at(model, x);
            for (std::size_t k = 0; k < dim; ++k)
                out[k] = cov.level_from_rho(levels[k], rho);
        },
        opts);
    report.quadrature_converged = limit.converged;
    report.quadrature_error = limit.error_estimate;
    double total = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        report.per_level[levels[k]] = limit.values[k];
        total += limit.values[k];
    }
    report.total = total;
    report.chaos_tail_bound = e.residual_mass() * c1.majorant_integral;
    report.quadrature_tail_note = c1.tail_estimate;

    for (double s : window_s) {
        const auto win = integrate_box_vec(
            model.n, 2.0 * s, dim,
            [&](std::span<const double> x, std::span<double> out) {
                double kernel = 1.0;
                for (double xi : x) kernel *= 1.0 - std::abs(xi) / (2.0 * s);
                const Mat rho = cross_covariance_at(model, x);
                for (std::size_t k = 0; k < dim; ++k)
                    out[k] = cov.level_from_rho(levels[k], rho) * kernel;
            },
            opts);
        VarianceReport::WindowRow row;
        row.s = s;
        for (std::size_t k = 0; k < dim; ++k) {
            row.per_level[levels[k]] = win.values[k];
            row.total += win.values[k];
        }
        report.windows.push_back(std::move(row));
    }
    return report;
}

std::string variance_report_to_json(const VarianceReport& report) {
    JsonWriter w;
    w.begin_object();
    w.kv("rank", report.rank);
    w.kv("box_radius", report.box_radius);
    w.kv("V", report.total);
    w.begin_array("per_level");
    for (const auto& [q, v] : report.per_level) {
        w.begin_object();
        w.kv("q", q);
        w.kv("V_q", v);
        w.end_object();
    }
    w.end_array();
    w.kv("chaos_tail_bound", report.chaos_tail_bound);
    w.kv("quadrature_tail_note", report.quadrature_tail_note);
    w.kv("quadrature_error", report.quadrature_error);
    w.kv("quadrature_converged", report.quadrature_converged);
    w.begin_array("windows");
    for (const auto& row : report.windows) {
        w.begin_object();
        w.kv("s", row.s);
        w.kv("V_s", row.total);
        w.begin_array("per_level");
        for (const auto& [q, v] : row.per_level) {
            w.begin_object();
            w.kv("q", q);
            w.kv("V_s_q", v);
            w.end_object();
        }
        w.end_array();
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

std::string variance_windows_to_csv(const VarianceReport& report) {
    std::string csv = "s,V_s\n";
    for (const auto& row : report.windows)
        csv += JsonWriter::number(row.s) + "," + JsonWriter::number(row.total) + "\n";
    return csv;
}

}  // namespace bm
