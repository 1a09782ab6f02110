#pragma once

#include <span>
#include <vector>

namespace bm {

double normal_cdf(double x);

// Two-sided Kolmogorov-Smirnov statistic of `values` against the cdf sampled
// in `cdf_at_sorted` (values get sorted internally).
double ks_statistic(std::vector<double> values, double (*cdf)(double, double, double),
                    double loc, double scale);

// cdf helper matching the signature above: N(loc, scale^2).
double normal_cdf_param(double x, double loc, double scale);

// Asymptotic Kolmogorov tail Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

// KS p-value with the standard finite-sample correction.
double ks_pvalue(double d, std::size_t n);

double mean(std::span<const double> v);
double sample_variance(std::span<const double> v);  // unbiased, mean-subtracted
double median(std::vector<double> v);

// Delete-1 jackknife standard error of the mean of per-replicate values.
double jackknife_stderr(std::span<const double> v);

// Sample covariance of paired values plus its delete-1 jackknife stderr.
struct CovEstimate {
    double value = 0.0;
    double stderr_jackknife = 0.0;
};
CovEstimate jackknife_covariance(std::span<const double> a, std::span<const double> b);

}  // namespace bm
