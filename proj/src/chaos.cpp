#include "bmfield/chaos.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>

#include "bmfield/errors.hpp"
#include "bmfield/gauss_hermite.hpp"
#include "bmfield/hermite.hpp"
#include "bmfield/jsonw.hpp"

namespace bm {

double ChaosExpansion::residual_mass() const {
    double captured_positive = 0.0;
    for (const auto& [q, terms] : levels) {
        if (q == 0) continue;
        for (const auto& t : terms)
            captured_positive += t.c * t.c * double(t.a.factorial());
    }
    return std::max(0.0, total_mass_estimate - mean * mean - captured_positive);
}

ChaosExpansion chaos_coefficients(const Functional& g, int m, const ChaosOptions& opts) {
    if (m < 1 || m > 4)
        throw ConfigError("chaos.m: tensorized quadrature supports 1 <= m <= 4, got " +
                          std::to_string(m));
    if (g.m != m) throw DimensionMismatch("functional dimension does not match m");
    if (opts.q_max < 1 || opts.q_max > 12)
        throw ConfigError("chaos.q_max: must be in [1, 12]");
    if (opts.quadrature_order < 2 * opts.q_max)
        throw ConfigError("chaos.quadrature_order: need at least 2*q_max");
    int order = opts.quadrature_order;
    if (g.discontinuous) order *= 2;  // jumps converge slowly under Gauss-Hermite
    const GaussHermiteRule rule = gauss_hermite(order);
    const int q_max = opts.q_max;

    const auto indices = MultiIndex::up_to_order(m, q_max);
    const std::size_t n_idx = indices.size();
    const std::size_t dim = n_idx + 1;  // extra slot accumulates G^2

    // Hermite values per node, degrees 0..q_max.
    std::vector<std::vector<double>> htab(std::size_t(order),
                                          std::vector<double>(std::size_t(q_max) + 1));
    for (int i = 0; i < order; ++i) hermite_values(rule.nodes[std::size_t(i)], htab[std::size_t(i)]);

    std::int64_t n_prefix = 1;
    for (int axis = 0; axis + 1 < m; ++axis) n_prefix *= order;

    std::atomic<bool> bad{false};
    std::mutex bad_mutex;
    std::string bad_node;

    const auto emit = [&](std::int64_t prefix, double* acc) {
        if (bad.load(std::memory_order_relaxed)) return;
        thread_local std::vector<double> x, gk;
        x.assign(std::size_t(m), 0.0);
        gk.assign(std::size_t(q_max) + 1, 0.0);
        // Decode prefix node indices (base `order` digits, axis 0 most significant).
        std::int64_t rest = prefix;
        thread_local std::vector<int> node_idx;
        node_idx.assign(std::size_t(m), 0);
        double w_prefix = 1.0;
        for (int axis = m - 2; axis >= 0; --axis) {
            const int ni = int(rest % order);
            rest /= order;
            node_idx[std::size_t(axis)] = ni;
            x[std::size_t(axis)] = rule.nodes[std::size_t(ni)];
            w_prefix *= rule.weights[std::size_t(ni)];
        }
        double gsq = 0.0;
        for (int i = 0; i < order; ++i) {
            x[std::size_t(m) - 1] = rule.nodes[std::size_t(i)];
            const double val = g(x);
            if (!std::isfinite(val)) {
                std::scoped_lock lock(bad_mutex);
                if (!bad.exchange(true)) {
                    char buf[160];
                    std::string coords;
                    for (int a = 0; a < m; ++a) {
                        std::snprintf(buf, sizeof(buf), "%s%.6g", a ? ", " : "", x[std::size_t(a)]);
                        coords += buf;
                    }
                    bad_node = coords;
                }
                return;
            }
            const double wv = rule.weights[std::size_t(i)] * val;
            const auto& h = htab[std::size_t(i)];
            for (int k = 0; k <= q_max; ++k) gk[std::size_t(k)] += wv * h[std::size_t(k)];
            gsq += wv * val;
        }
        for (std::size_t idx = 0; idx < n_idx; ++idx) {
            const MultiIndex& a = indices[idx];
            double h_prefix = 1.0;
            for (int axis = 0; axis + 1 < m; ++axis)
                h_prefix *= htab[std::size_t(node_idx[std::size_t(axis)])][std::size_t(a[axis])];
            acc[idx] += w_prefix * h_prefix * gk[std::size_t(a[m - 1])];
        }
        acc[n_idx] += w_prefix * gsq;
    };

    std::vector<double> acc(dim, 0.0);
    det_sum_vec(n_prefix, dim, emit, acc.data(), opts.exec);
    if (bad.load())
        throw QuadratureError("functional '" + g.label + "' evaluated non-finite at node (" +
                              bad_node + ")");

    ChaosExpansion e;
    e.m = m;
    e.q_max = q_max;
    e.total_mass_estimate = acc[n_idx];
    e.mean = acc[0];  // multi-index 0 comes first in up_to_order
    double captured = 0.0;
    for (std::size_t idx = 0; idx < n_idx; ++idx) {
        const MultiIndex& a = indices[idx];
        const double fact = double(a.factorial());
        const double c = acc[idx] / fact;
        if (std::abs(c) * std::sqrt(fact) < opts.drop_threshold) continue;
        e.levels[a.order()].push_back({a, c});
        captured += c * c * fact;
    }
    e.captured_mass = captured;
    return e;
}

int hermite_rank(const ChaosExpansion& e, double tol) {
    for (const auto& [q, terms] : e.levels) {
        if (q == 0) continue;
        for (const auto& t : terms)
            if (std::abs(t.c) > tol) return q;
    }
    throw Error("degenerate functional: no chaos coefficient above tolerance " +
                JsonWriter::number(tol));
}

double evaluate_level(const ChaosExpansion& e, int q, std::span<const double> x) {
    auto it = e.levels.find(q);
    if (it == e.levels.end())
        throw Error("chaos level " + std::to_string(q) + " absent from expansion");
    double sum = 0.0;
    for (const auto& t : it->second) sum += t.c * multi_hermite_value(t.a, x);
    return sum;
}

double evaluate_truncated(const ChaosExpansion& e, std::span<const double> x) {
    double sum = 0.0;
    for (const auto& [q, terms] : e.levels) {
        if (q == 0) continue;
        for (const auto& t : terms) sum += t.c * multi_hermite_value(t.a, x);
    }
    return sum;
}

std::string expansion_to_json(const ChaosExpansion& e) {
    JsonWriter w;
    w.begin_object();
    w.kv("m", e.m);
    w.kv("q_max", e.q_max);
    w.begin_array("levels");
    for (const auto& [q, terms] : e.levels) {
        w.begin_object();
        w.kv("q", q);
        w.begin_array("terms");
        for (const auto& t : terms) {
            w.begin_object();
            w.begin_array("a");
            for (int i = 0; i < t.a.dim(); ++i) w.value(t.a[i]);
            w.end_array();
            w.kv("c", t.c);
            w.end_object();
        }
        w.end_array();
        w.end_object();
    }
    w.end_array();
    w.kv("captured_mass", e.captured_mass);
    w.kv("total_mass", e.total_mass_estimate);
    w.end_object();
    return w.str();
}

}  // namespace bm
