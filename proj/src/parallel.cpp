#include "bmfield/parallel.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bm {

namespace {
constexpr std::int64_t kScalarChunk = 4096;
// Vector chunks are sized so a full set of partials stays in the tens of MB
// even for wide accumulators.
std::int64_t vec_chunk(std::size_t dim) {
    const std::int64_t target = std::int64_t(1) << 22;
    return std::max<std::int64_t>(1024, target / std::max<std::size_t>(dim, 1));
}
}  // namespace

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

namespace detail {
double pairwise_combine(std::span<const double> partial) {
    if (partial.empty()) return 0.0;
    std::vector<double> level(partial.begin(), partial.end());
    while (level.size() > 1) {
        std::size_t half = (level.size() + 1) / 2;
        for (std::size_t i = 0; i + half < level.size(); ++i) level[i] += level[i + half];
        level.resize(half);
    }
    return level[0];
}
}  // namespace detail

double det_sum(std::int64_t n, const std::function<double(std::int64_t)>& term, Exec exec) {
    if (n <= 0) return 0.0;
    const std::int64_t nchunks = (n + kScalarChunk - 1) / kScalarChunk;
    std::vector<double> partial(static_cast<std::size_t>(nchunks), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
#endif
    for (std::int64_t c = 0; c < nchunks; ++c) {
        const std::int64_t lo = c * kScalarChunk;
        const std::int64_t hi = std::min(n, lo + kScalarChunk);
        double acc = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) acc += term(i);
        partial[static_cast<std::size_t>(c)] = acc;
    }
    if (exec == Exec::Serial) {
        // Same chunking and combine as the parallel path, so results match bit for bit.
    }
    return detail::pairwise_combine(partial);
}

void det_sum_vec(std::int64_t n, std::size_t dim,
                 const std::function<void(std::int64_t, double*)>& emit, double* out,
                 Exec exec) {
    std::fill(out, out + dim, 0.0);
    if (n <= 0 || dim == 0) return;
    const std::int64_t chunk = vec_chunk(dim);
    const std::int64_t nchunks = (n + chunk - 1) / chunk;
    std::vector<double> partial(static_cast<std::size_t>(nchunks) * dim, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
#endif
    for (std::int64_t c = 0; c < nchunks; ++c) {
        const std::int64_t lo = c * chunk;
        const std::int64_t hi = std::min(n, lo + chunk);
        double* acc = partial.data() + static_cast<std::size_t>(c) * dim;
        for (std::int64_t i = lo; i < hi; ++i) emit(i, acc);
    }
    // Fixed-order pairwise combine across chunk partials, one component at a time.
    std::vector<double> column(static_cast<std::size_t>(nchunks));
    for (std::size_t d = 0; d < dim; ++d) {
        for (std::int64_t c = 0; c < nchunks; ++c)
            column[static_cast<std::size_t>(c)] = partial[static_cast<std::size_t>(c) * dim + d];
        out[d] = detail::pairwise_combine(column);
    }
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body, Exec exec) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
#endif
    for (std::int64_t i = 0; i < n; ++i) body(i);
    (void)exec;
}

double naive_sum_ref(std::span<const double> values) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
}

}  // namespace bm
