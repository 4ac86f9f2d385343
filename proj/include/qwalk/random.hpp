#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

namespace qwalk {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seed for stream `index` under `master`; independent of scheduling order.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master;
    const std::uint64_t a = splitmix64(s);
    std::uint64_t t = a ^ (index * 0xd1b54a32d192ed03ULL);
    splitmix64(t);
    return splitmix64(t);
}

// xoshiro256** by Blackman and Vigna.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // Uniform on {0, ..., n-1}.
    std::uint64_t below(std::uint64_t n) noexcept {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>((*this)()) * n) >> 64);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> s_{};
};

// Walker alias table over indices 0..n-1. One 64-bit draw per sample: the high
// half picks a column, the low half is compared with the column threshold.
class AliasTable {
public:
    AliasTable() = default;
    explicit AliasTable(const std::vector<double>& weights);

    [[nodiscard]] std::size_t size() const noexcept { return threshold_.size(); }

    std::uint32_t sample(Rng& rng) const noexcept { return pick(rng()); }

    [[nodiscard]] std::uint32_t pick(std::uint64_t u) const noexcept {
        const auto col = static_cast<std::uint32_t>(((u >> 32) * threshold_.size()) >> 32);
        return (u & 0xffffffffULL) < threshold_[col] ? col : alias_[col];
    }

    // Exact probability of index i implied by the quantized table.
    [[nodiscard]] double probability(std::uint32_t i) const;

    [[nodiscard]] const std::vector<std::uint64_t>& thresholds() const noexcept { return threshold_; }
    [[nodiscard]] const std::vector<std::uint32_t>& aliases() const noexcept { return alias_; }

private:
    std::vector<std::uint64_t> threshold_;
    std::vector<std::uint32_t> alias_;
};

}  // namespace qwalk
