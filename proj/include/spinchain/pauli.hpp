#ifndef SPINCHAIN_PAULI_HPP
#define SPINCHAIN_PAULI_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "spinchain/bits.hpp"
#include "spinchain/errors.hpp"

namespace spinchain {

enum class Pauli : std::uint8_t { X, Y, Z };

inline char pauli_char(Pauli p) {
    switch (p) {
        case Pauli::X: return 'X';
        case Pauli::Y: return 'Y';
        default: return 'Z';
    }
}

// One weighted Pauli string, e.g. -0.5 * X_3 Z_4 Y_5. Sites are kept
// sorted ascending with letters aligned; coefficients are real (Y supplies
// its +-i factors when the string is applied to a basis state).
struct PauliString {
    std::vector<int> sites;
    std::vector<Pauli> letters;
    double coefficient = 0.0;
};

// A spin-1/2 chain Hamiltonian on a periodic ring: a merged, canonically
// ordered sum of Pauli strings.
struct HamiltonianSpec {
    int n_sites = 0;
    std::vector<PauliString> terms;
};

namespace detail {

inline void sort_string_sites(PauliString& s) {
    std::vector<std::size_t> order(s.sites.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return s.sites[a] < s.sites[b]; });
    PauliString out;
    out.coefficient = s.coefficient;
    for (std::size_t k : order) {
        out.sites.push_back(s.sites[k]);
        out.letters.push_back(s.letters[k]);
    }
    s = std::move(out);
}

} // namespace detail

inline void validate_string(const PauliString& s, int n_sites) {
    if (s.sites.size() != s.letters.size())
        throw domain_error("PauliString: sites/letters length mismatch");
    for (std::size_t k = 0; k < s.sites.size(); ++k) {
        if (s.sites[k] < 0 || s.sites[k] >= n_sites)
            throw domain_error("PauliString: site index out of range");
        if (k > 0 && s.sites[k] <= s.sites[k - 1])
            throw domain_error("PauliString: sites must be distinct");
    }
}

// Sorts each string's sites, merges identical strings by adding their
// coefficients, and drops terms whose coefficient is exactly zero.
inline HamiltonianSpec canonicalize(HamiltonianSpec spec) {
    using Key = std::pair<std::vector<int>, std::vector<Pauli>>;
    std::map<Key, double> merged;
    for (auto& t : spec.terms) {
        detail::sort_string_sites(t);
        validate_string(t, spec.n_sites);
        merged[{t.sites, t.letters}] += t.coefficient;
    }
    HamiltonianSpec out;
    out.n_sites = spec.n_sites;
    for (const auto& [key, c] : merged) {
        if (c == 0.0) continue;
        out.terms.push_back({key.first, key.second, c});
    }
    return out;
}

namespace detail {

inline void require_ring_size(int n_sites, const char* who) {
    if (n_sites < 4)
        throw domain_error(std::string(who) + ": n_sites must be >= 4");
    if (n_sites % 2 != 0)
        throw domain_error(std::string(who) + ": n_sites must be even");
    if (n_sites > kMaxSites)
        throw resource_error(std::string(who) + ": n_sites exceeds the 24-site guard");
}

} // namespace detail

// XX chain with a chiral three-spin interaction:
//   H = -sum_i [ x_i x_{i+1} + y_i y_{i+1}
//                + (lambda/2)(x_{i-1} z_i y_{i+1} - y_{i-1} z_i x_{i+1}) ]
// on a periodic ring. Zero-coefficient three-site strings (lambda = 0) are
// dropped, so the term count is 4N for lambda != 0 and 2N otherwise.
inline HamiltonianSpec build_xx3(int n_sites, double lambda) {
    detail::require_ring_size(n_sites, "build_xx3");
    HamiltonianSpec spec;
    spec.n_sites = n_sites;
    for (int i = 0; i < n_sites; ++i) {
        const int a = (i + n_sites - 1) % n_sites;
        const int j = (i + 1) % n_sites;
        spec.terms.push_back({{i, j}, {Pauli::X, Pauli::X}, -1.0});
        spec.terms.push_back({{i, j}, {Pauli::Y, Pauli::Y}, -1.0});
        spec.terms.push_back({{a, i, j}, {Pauli::X, Pauli::Z, Pauli::Y}, -lambda / 2.0});
        spec.terms.push_back({{a, i, j}, {Pauli::Y, Pauli::Z, Pauli::X}, +lambda / 2.0});
    }
    return canonicalize(std::move(spec));
}

// Antiferromagnetic XXZ chain:
//   H = +sum_i [ x_i x_{i+1} + y_i y_{i+1} + delta z_i z_{i+1} ]
// (opposite overall sign convention from build_xx3).
inline HamiltonianSpec build_xxz(int n_sites, double delta) {
    detail::require_ring_size(n_sites, "build_xxz");
    HamiltonianSpec spec;
    spec.n_sites = n_sites;
    for (int i = 0; i < n_sites; ++i) {
        const int j = (i + 1) % n_sites;
        spec.terms.push_back({{i, j}, {Pauli::X, Pauli::X}, 1.0});
        spec.terms.push_back({{i, j}, {Pauli::Y, Pauli::Y}, 1.0});
        spec.terms.push_back({{i, j}, {Pauli::Z, Pauli::Z}, delta});
    }
    return canonicalize(std::move(spec));
}

// Rewrites the spec in raising/lowering operators with cancellation across
// terms and reports whether every surviving monomial preserves the number
// of up spins, i.e. whether [H, Sz_total] = 0.
inline bool conserves_sz(const HamiltonianSpec& spec) {
    using Key = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>; // plus, minus, z masks
    std::map<Key, std::complex<double>> monomials;
    for (const auto& t : spec.terms) {
        std::vector<int> flips;       // positions within the string carrying X or Y
        std::uint32_t zmask = 0;
        for (std::size_t k = 0; k < t.sites.size(); ++k) {
            if (t.letters[k] == Pauli::Z)
                zmask |= 1u << t.sites[k];
            else
                flips.push_back(static_cast<int>(k));
        }
        const auto n_expand = std::size_t{1} << flips.size();
        for (std::size_t pick = 0; pick < n_expand; ++pick) {
            // bit b of pick selects sigma^+ (set) or sigma^- (clear) at flips[b]
            std::uint32_t plus = 0, minus = 0;
            std::complex<double> c{t.coefficient, 0.0};
            for (std::size_t b = 0; b < flips.size(); ++b) {
                const int k = flips[b];
                const bool raise = (pick >> b) & 1;
                if (raise)
                    plus |= 1u << t.sites[k];
                else
                    minus |= 1u << t.sites[k];
                // X = (+) + (-);  Y = -i(+) + i(-)
                if (t.letters[k] == Pauli::Y)
                    c *= raise ? std::complex<double>{0.0, -1.0}
                               : std::complex<double>{0.0, +1.0};
            }
            monomials[{plus, minus, zmask}] += c;
        }
    }
    for (const auto& [key, c] : monomials) {
        if (std::abs(c) <= 1e-12) continue;
        if (popcount32(std::get<0>(key)) != popcount32(std::get<1>(key)))
            return false;
    }
    return true;
}

// True when every matrix element of the spec is real in the up/down product
// basis: with real coefficients that is exactly "every string has an even
// number of Y letters". XXZ qualifies; the XX3 three-spin strings (one Y
// each) do not, and their sum is purely imaginary, so XX3 at lambda != 0
// needs complex amplitudes.
inline bool is_real_in_product_basis(const HamiltonianSpec& spec) {
    for (const auto& t : spec.terms) {
        int y = 0;
        for (Pauli p : t.letters)
            if (p == Pauli::Y) ++y;
        if (y % 2 != 0) return false;
    }
    return true;
}

// Cyclically relabels sites i -> (i + shift) mod N. Used to check
// translation invariance of built models.
inline HamiltonianSpec translated(const HamiltonianSpec& spec, int shift) {
    HamiltonianSpec out;
    out.n_sites = spec.n_sites;
    for (const auto& t : spec.terms) {
        PauliString s = t;
        for (auto& site : s.sites) site = (site + shift) % spec.n_sites;
        out.terms.push_back(std::move(s));
    }
    return canonicalize(std::move(out));
}

inline bool same_terms(const HamiltonianSpec& a, const HamiltonianSpec& b, double tol = 0.0) {
    if (a.n_sites != b.n_sites || a.terms.size() != b.terms.size()) return false;
    for (std::size_t k = 0; k < a.terms.size(); ++k) {
        const auto& ta = a.terms[k];
        const auto& tb = b.terms[k];
        if (ta.sites != tb.sites || ta.letters != tb.letters) return false;
        if (std::abs(ta.coefficient - tb.coefficient) > tol) return false;
    }
    return true;
}

} // namespace spinchain

#endif
