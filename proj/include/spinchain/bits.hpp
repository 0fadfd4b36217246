#ifndef SPINCHAIN_BITS_HPP
#define SPINCHAIN_BITS_HPP

#include <array>
#include <bit>
#include <cstdint>

namespace spinchain {

inline constexpr int kMaxSites = 24;

namespace detail {

struct BinomialTable {
    std::array<std::array<std::uint64_t, kMaxSites + 2>, kMaxSites + 2> c{};
    constexpr BinomialTable() {
        for (int n = 0; n <= kMaxSites + 1; ++n) {
            c[n][0] = 1;
            for (int k = 1; k <= n; ++k)
                c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
        }
    }
};

inline constexpr BinomialTable kBinom{};

// splitmix64, used for deterministic start vectors.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

inline constexpr std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n || n < 0) return 0;
    return detail::kBinom.c[n][k];
}

inline int popcount32(std::uint32_t m) { return std::popcount(m); }

// Colexicographic rank of a bitmask among all masks with the same popcount;
// masks sorted by ascending numeric value. rank = sum_j C(b_j, j) over set
// bits b_1 < b_2 < ...
inline std::size_t combinadic_rank(std::uint32_t m) {
    std::size_t r = 0;
    int j = 1;
    while (m) {
        r += binomial(std::countr_zero(m), j++);
        m &= m - 1;
    }
    return r;
}

// Removes bits lo and hi (lo < hi) from m and packs the remainder.
inline std::uint32_t squeeze_out_two_bits(std::uint32_t m, int lo, int hi) {
    const std::uint32_t low = m & ((1u << lo) - 1);
    const std::uint32_t mid = (m >> (lo + 1)) & ((1u << (hi - lo - 1)) - 1);
    const std::uint32_t high = m >> (hi + 1);
    return low | (mid << lo) | (high << (hi - 1));
}

} // namespace spinchain

#endif
