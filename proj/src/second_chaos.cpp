#include "bmfield/second_chaos.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "bmfield/errors.hpp"
#include "bmfield/gauss_hermite.hpp"
#include "bmfield/jsonw.hpp"

namespace bm {

SecondChaosMatrix c_matrix(const Functional& g, int m, int quadrature_order, Exec exec) {
    if (m < 1 || m > 4) throw ConfigError("c_matrix: 1 <= m <= 4");
    if (g.m != m) throw DimensionMismatch("c_matrix: functional dimension mismatch");
    int order = quadrature_order;
    if (g.discontinuous) order *= 2;
    const GaussHermiteRule rule = gauss_hermite(order);
    std::int64_t total = 1;
    for (int axis = 0; axis < m; ++axis) total *= order;

    const std::size_t dim = std::size_t(m) * m;
    std::vector<double> acc(dim, 0.0);
    det_sum_vec(
        total, dim,
        [&](std::int64_t node, double* slot) {
            thread_local std::vector<double> x;
            x.assign(std::size_t(m), 0.0);
            std::int64_t rest = node;
            double w = 1.0;
            for (int axis = m - 1; axis >= 0; --axis) {
                const std::int64_t i = rest % order;
                rest /= order;
                x[std::size_t(axis)] = rule.nodes[std::size_t(i)];
                w *= rule.weights[std::size_t(i)];
            }
            // Non-finite evaluations propagate into the accumulator and are
            // reported by the finiteness check below.
            const double wv = w * g(x);
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k) {
                    const double factor = j == k
                                              ? x[std::size_t(j)] * x[std::size_t(j)] - 1.0
                                              : x[std::size_t(j)] * x[std::size_t(k)];
                    slot[std::size_t(j) * m + k] += wv * factor;
                }
        },
        acc.data(), exec);

    SecondChaosMatrix cm;
    cm.c = Mat(m, m);
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
            // Symmetry enforced by averaging the (j,k) and (k,j) estimates.
            cm.c(j, k) = 0.5 * (acc[std::size_t(j) * m + k] + acc[std::size_t(k) * m + j]);
    if (!cm.c.all_finite()) throw QuadratureError("c_matrix: quadrature produced non-finite values");
    return cm;
}

double v2_trace(const CovarianceModel& model, const SecondChaosMatrix& cm, double box_radius,
                const BoxQuadratureOptions& opts) {
    if (!model.whitened) throw ModelError("v2_trace: model must be whitened");
    if (cm.c.rows() != model.m) throw DimensionMismatch("v2_trace: matrix dimension mismatch");
    const auto result = integrate_box(
        model.n, box_radius,
        [&](std::span<const double> x) {
            const Mat r = eval_r(model, x);
            const Mat rc = r * cm.c;
            const Mat sq = rc * rc;
            double trace = 0.0;
            for (int i = 0; i < model.m; ++i) trace += sq(i, i);
            return 0.5 * trace;
        },
        opts);
    if (!result.converged)
        throw BudgetExceeded("v2_trace: quadrature budget exceeded before convergence");
    return result.value;
}

double v2_spectral(const SpectralModel& spec, const SecondChaosMatrix& cm, int freq_points) {
    if (!spec.normalized())
        throw ModelError("v2_spectral: spectral model is not normalized");
    if (cm.c.rows() != spec.m()) throw DimensionMismatch("v2_spectral: matrix dimension mismatch");
    const int n = spec.n(), m = spec.m();
    const std::int64_t pts = freq_points % 2 == 0 ? freq_points + 1 : freq_points;
    const double t_max = spec.t_max();
    const double h = 2.0 * t_max / double(pts - 1);
    std::int64_t total = 1;
    for (int axis = 0; axis < n; ++axis) total *= pts;

    // Normalization check: every channel density must integrate to 1.
    {
        std::vector<double> diag(std::size_t(m), 0.0);
        std::vector<double> t(std::size_t(n), 0.0), a(std::size_t(m), 0.0);
        for (std::int64_t node = 0; node < total; ++node) {
            std::int64_t rest = node;
            double w = 1.0;
            for (int axis = n - 1; axis >= 0; --axis) {
                const std::int64_t i = rest % pts;
                rest /= pts;
                t[std::size_t(axis)] = -t_max + double(i) * h;
                w *= (i == 0 || i == pts - 1) ? 0.5 * h : h;
            }
            spec.amplitude(t, a);
            for (int j = 0; j < m; ++j) diag[std::size_t(j)] += w * a[std::size_t(j)] * a[std::size_t(j)];
        }
        for (int j = 0; j < m; ++j)
            if (std::abs(diag[std::size_t(j)] - 1.0) > 1e-6)
                throw ModelError("v2_spectral: channel " + std::to_string(j + 1) +
                                 " density integrates to " + JsonWriter::number(diag[std::size_t(j)]) +
                                 ", expected 1");
    }

    const double h_sq = det_sum(
        total,
        [&](std::int64_t node) {
            thread_local std::vector<double> t, tneg, a, aneg, ca;
            t.assign(std::size_t(n), 0.0);
            tneg.assign(std::size_t(n), 0.0);
            a.assign(std::size_t(m), 0.0);
            aneg.assign(std::size_t(m), 0.0);
            ca.assign(std::size_t(m), 0.0);
            std::int64_t rest = node;
            double w = 1.0;
            for (int axis = n - 1; axis >= 0; --axis) {
                const std::int64_t i = rest % pts;
                rest /= pts;
                t[std::size_t(axis)] = -t_max + double(i) * h;
                tneg[std::size_t(axis)] = -t[std::size_t(axis)];
                w *= (i == 0 || i == pts - 1) ? 0.5 * h : h;
            }
            spec.amplitude(t, a);
            spec.amplitude(tneg, aneg);
            mat_vec_mul(cm.c, a, ca);
            double hval = 0.0;
            for (int j = 0; j < m; ++j) hval += aneg[std::size_t(j)] * ca[std::size_t(j)];
            return w * hval * hval;
        },
        Exec::Parallel);

    return 0.5 * std::pow(2.0 * std::numbers::pi, double(n)) * h_sq;
}

std::string second_chaos_report_json(double v2_trace_value, double v2_spectral_value,
                                     double v2_chaos_value, const SecondChaosMatrix& cm) {
    JsonWriter w;
    w.begin_object();
    w.kv("V2_trace", v2_trace_value);
    w.kv("V2_spectral", v2_spectral_value);
    w.kv("V2_chaos", v2_chaos_value);
    w.begin_array("C_matrix");
    for (int i = 0; i < cm.c.rows(); ++i) {
        w.begin_array();
        for (int j = 0; j < cm.c.cols(); ++j) w.value(cm.c(i, j));
        w.end_array();
    }
    w.end_array();
    w.kv("convention", "density/plain-exponent");
    w.end_object();
    return w.str();
}

}  // namespace bm
