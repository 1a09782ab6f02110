#include "bmfield/stats.hpp"

#include <algorithm>
#include <cmath>

#include "bmfield/errors.hpp"

namespace bm {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_cdf_param(double x, double loc, double scale) {
    return normal_cdf((x - loc) / scale);
}

double ks_statistic(std::vector<double> values, double (*cdf)(double, double, double),
                    double loc, double scale) {
    if (values.empty()) throw InsufficientReplicates("KS statistic of empty sample");
    std::sort(values.begin(), values.end());
    const double n = double(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double f = cdf(values[i], loc, scale);
        d = std::max(d, std::max((double(i) + 1.0) / n - f, f - double(i) / n));
    }
    return d;
}

double kolmogorov_q(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * double(k) * double(k) * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_pvalue(double d, std::size_t n) {
    const double sn = std::sqrt(double(n));
    return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

double mean(std::span<const double> v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / double(v.size());
}

double sample_variance(std::span<const double> v) {
    if (v.size() < 2) throw InsufficientReplicates("variance needs at least two values");
    const double mu = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - mu) * (x - mu);
    return s / double(v.size() - 1);
}

double median(std::vector<double> v) {
    if (v.empty()) throw InsufficientReplicates("median of empty sample");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double jackknife_stderr(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n < 2) throw InsufficientReplicates("jackknife needs at least two replicates");
    const double total = mean(v) * double(n);
    double ssq = 0.0;
    const double full = total / double(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double leave = (total - v[i]) / double(n - 1);
        ssq += (leave - full) * (leave - full);
    }
    return std::sqrt(double(n - 1) / double(n) * ssq);
}

CovEstimate jackknife_covariance(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    if (n != b.size()) throw DimensionMismatch("jackknife_covariance length mismatch");
    if (n < 3) throw InsufficientReplicates("jackknife covariance needs >= 3 replicates");
    double sa = 0, sb = 0, sab = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sa += a[i];
        sb += b[i];
        sab += a[i] * b[i];
    }
    auto cov_from = [](double suma, double sumb, double sumab, double count) {
        const double ma = suma / count, mb = sumb / count;
        return (sumab - count * ma * mb) / (count - 1.0);
    };
    CovEstimate est;
    est.value = cov_from(sa, sb, sab, double(n));
    const double full = est.value;
    double ssq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double leave =
            cov_from(sa - a[i], sb - b[i], sab - a[i] * b[i], double(n - 1));
        ssq += (leave - full) * (leave - full);
    }
    // Jackknife spread around the full-sample estimate.
    est.stderr_jackknife = std::sqrt(double(n - 1) / double(n) * ssq);
    return est;
}

}  // namespace bm
