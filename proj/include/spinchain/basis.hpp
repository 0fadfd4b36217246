#ifndef SPINCHAIN_BASIS_HPP
#define SPINCHAIN_BASIS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "spinchain/bits.hpp"
#include "spinchain/errors.hpp"

namespace spinchain {

// All N-bit masks with a fixed popcount (bit j set = spin up at site j),
// in ascending numeric order. rank() inverts states[] via the combinadic.
struct SectorBasis {
    int n_sites = 0;
    int n_up = 0;
    std::vector<std::uint32_t> states;

    std::size_t size() const { return states.size(); }

    std::size_t rank(std::uint32_t mask) const { return combinadic_rank(mask); }

    bool contains(std::uint32_t mask) const {
        return popcount32(mask) == n_up && mask < (std::uint32_t{1} << n_sites);
    }
};

inline SectorBasis enumerate_sector(int n_sites, int n_up) {
    if (n_sites < 0 || n_sites > kMaxSites)
        throw resource_error("enumerate_sector: n_sites must be in [0, " +
                             std::to_string(kMaxSites) + "]");
    if (n_up < 0 || n_up > n_sites)
        throw domain_error("enumerate_sector: n_up must be in [0, n_sites]");

    SectorBasis basis;
    basis.n_sites = n_sites;
    basis.n_up = n_up;
    basis.states.reserve(static_cast<std::size_t>(binomial(n_sites, n_up)));
    if (n_up == 0) {
        basis.states.push_back(0);
        return basis;
    }
    // Gosper's hack walks masks of fixed popcount in ascending order.
    const std::uint64_t limit = std::uint64_t{1} << n_sites;
    std::uint64_t m = (std::uint64_t{1} << n_up) - 1;
    while (m < limit) {
        basis.states.push_back(static_cast<std::uint32_t>(m));
        const std::uint64_t c = m & (~m + 1);
        const std::uint64_t r = m + c;
        m = (((r ^ m) >> 2) / c) | r;
    }
    return basis;
}

} // namespace spinchain

#endif
