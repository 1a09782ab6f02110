#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace bm {

// Execution policy for the data-parallel kernels. Results are required to be
// bit-identical between Serial and Parallel and for every worker count: all
// reductions run over fixed-size chunks whose internal summation order never
// changes, followed by a pairwise combine in a fixed order.
enum class Exec { Serial, Parallel };

int max_threads();
void set_threads(int n);

namespace detail {
double pairwise_combine(std::span<const double> partial);
}

// Deterministic sum of term(i) for i in [0, n).
double det_sum(std::int64_t n, const std::function<double(std::int64_t)>& term,
               Exec exec = Exec::Parallel);

// Deterministic accumulation of a dim-sized contribution per item:
// emit(i, acc) must add item i's contribution into acc[0..dim).
void det_sum_vec(std::int64_t n, std::size_t dim,
                 const std::function<void(std::int64_t, double*)>& emit,
                 double* out, Exec exec = Exec::Parallel);

// Plain loop over independent items (disjoint writes only).
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body,
                  Exec exec = Exec::Parallel);

// Naive left-to-right sum, kept as the serial reference for the kernels above.
double naive_sum_ref(std::span<const double> values);

}  // namespace bm
