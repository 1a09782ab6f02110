#pragma once

#include <span>
#include <vector>

#include "bmfield/multiindex.hpp"

namespace bm {

// Probabilists' Hermite polynomials: orthogonal w.r.t. the standard normal
// density (variance-1 weight), <H_p, H_q> = delta_pq * p!.

// H_n(x) by the three-term recurrence H_{n+1} = x H_n - n H_{n-1}. n <= 60.
double hermite_value(int n, double x);

// Fill out[k] = H_k(x) for k = 0..out.size()-1.
void hermite_values(double x, std::span<double> out);

// Monomial coefficients: table[n][k] is the x^k coefficient of H_n. Entries
// are exact integers (representable in double for n <= 20).
std::vector<std::vector<double>> hermite_monomial_table(int n_max);

// Product of univariate evaluations, H_a(x) = prod_i H_{a_i}(x_i).
double multi_hermite_value(const MultiIndex& a, std::span<const double> x);

}  // namespace bm
