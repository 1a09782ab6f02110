#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace bm {

// Exponent vector a = (a_1, ..., a_m), a_i >= 0. order() = sum a_i and
// factorial() = prod a_i! are exact in integer arithmetic for order <= 20.
class MultiIndex {
  public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> exponents);

    int dim() const { return int(e_.size()); }
    int order() const;
    std::uint64_t factorial() const;
    int operator[](int i) const { return e_[std::size_t(i)]; }
    std::span<const int> exponents() const { return e_; }

    bool operator==(const MultiIndex& o) const { return e_ == o.e_; }
    bool operator<(const MultiIndex& o) const { return e_ < o.e_; }

    // All multi-indices of dimension m with |a| = q, lexicographic order.
    static std::vector<MultiIndex> all_of_order(int m, int q);
    // All multi-indices with |a| <= q_max, grouped by ascending order.
    static std::vector<MultiIndex> up_to_order(int m, int q_max);

  private:
    std::vector<int> e_;
};

std::uint64_t exact_factorial(int n);

}  // namespace bm
