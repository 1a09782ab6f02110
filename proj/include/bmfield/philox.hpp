#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace bm {

// Philox4x32-10 counter-based generator. Every 128-bit counter block maps to
// four independent 32-bit words, so draws are addressable by index and the
// stream is reproducible for any evaluation order or worker count.
struct Philox4x32 {
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = std::uint64_t(kMul0) * ctr[0];
            const std::uint64_t p1 = std::uint64_t(kMul1) * ctr[2];
            const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
            const std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }
};

// Indexed stream of uniforms / normals on top of Philox. `stream` separates
// independent uses of the same seed (field noise, synthetic draws, ...).
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint32_t stream) : seed_(seed), stream_(stream) {}

    std::array<std::uint32_t, 4> raw(std::uint64_t index, std::uint32_t salt = 0) const {
        const std::array<std::uint32_t, 4> ctr = {std::uint32_t(index), std::uint32_t(index >> 32),
                                                  stream_, salt};
        const std::array<std::uint32_t, 2> key = {std::uint32_t(seed_), std::uint32_t(seed_ >> 32)};
        return Philox4x32::block(ctr, key);
    }

    // Open-interval uniform in (0,1); never returns 0 or 1.
    static double to_uniform(std::uint32_t w) { return (double(w) + 0.5) * 0x1p-32; }

    double uniform(std::uint64_t index, std::uint32_t salt = 0) const {
        return to_uniform(raw(index, salt)[0]);
    }

    // Box-Muller pair from one counter block.
    std::pair<double, double> normal_pair(std::uint64_t index, std::uint32_t salt = 0) const {
        const auto w = raw(index, salt);
        const double u1 = to_uniform(w[0]);
        const double u2 = to_uniform(w[1]);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    double normal(std::uint64_t index, std::uint32_t salt = 0) const {
        return normal_pair(index, salt).first;
    }

    std::uint64_t seed() const { return seed_; }
    std::uint32_t stream() const { return stream_; }

  private:
    std::uint64_t seed_;
    std::uint32_t stream_;
};

}  // namespace bm
