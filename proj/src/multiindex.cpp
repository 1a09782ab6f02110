#include "bmfield/multiindex.hpp"

#include <numeric>
#include <string>

#include "bmfield/errors.hpp"

namespace bm {

std::uint64_t exact_factorial(int n) {
    if (n < 0) throw UnsupportedDegree("factorial of negative integer");
    if (n > 20) throw UnsupportedDegree("exact factorial supported for n <= 20, got " +
                                        std::to_string(n));
    std::uint64_t f = 1;
    for (int k = 2; k <= n; ++k) f *= std::uint64_t(k);
    return f;
}

MultiIndex::MultiIndex(std::vector<int> exponents) : e_(std::move(exponents)) {
    for (int v : e_)
        if (v < 0) throw UnsupportedDegree("multi-index entries must be nonnegative");
}

int MultiIndex::order() const { return std::accumulate(e_.begin(), e_.end(), 0); }

std::uint64_t MultiIndex::factorial() const {
    if (order() > 20)
        throw UnsupportedDegree("multi-index factorial is exact only for order <= 20");
    std::uint64_t f = 1;
    for (int v : e_) f *= exact_factorial(v);
    return f;
}

namespace {
void emit_order(int m, int q, std::vector<int>& scratch, int pos,
                std::vector<MultiIndex>& out) {
    if (pos == m - 1) {
        scratch[std::size_t(pos)] = q;
        out.emplace_back(scratch);
        return;
    }
    for (int v = q; v >= 0; --v) {
        scratch[std::size_t(pos)] = v;
        emit_order(m, q - v, scratch, pos + 1, out);
    }
}
}  // namespace

std::vector<MultiIndex> MultiIndex::all_of_order(int m, int q) {
    std::vector<MultiIndex> out;
    if (m <= 0) return out;
    std::vector<int> scratch(std::size_t(m), 0);
    emit_order(m, q, scratch, 0, out);
    return out;
}

std::vector<MultiIndex> MultiIndex::up_to_order(int m, int q_max) {
    std::vector<MultiIndex> out;
    for (int q = 0; q <= q_max; ++q) {
        auto level = all_of_order(m, q);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

}  // namespace bm
