#ifndef SPINCHAIN_ED_HPP
#define SPINCHAIN_ED_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "spinchain/basis.hpp"
#include "spinchain/bits.hpp"
#include "spinchain/errors.hpp"
#include "spinchain/parallel.hpp"
#include "spinchain/pauli.hpp"

namespace spinchain {

using Complex = std::complex<double>;

// Sector dimension at or below which the dense eigensolver is used.
inline constexpr std::size_t kDenseThreshold = 512;

// Energies closer than this are treated as degenerate.
inline constexpr double kDegeneracyTol = 1e-10;

namespace detail {

// A Pauli string precompiled to bit masks. Matrix elements against a source
// basis state are coeff * (+-1 from Z) * i^e from Y letters, with e even
// exactly when the string has an even number of Y's.
struct CompiledTerm {
    std::uint32_t flip_mask = 0; // X and Y sites
    std::uint32_t z_mask = 0;
    std::uint32_t y_mask = 0;
    int y_count = 0;
    double coeff = 0.0;
};

inline CompiledTerm compile_term(const PauliString& t) {
    CompiledTerm ct;
    ct.coeff = t.coefficient;
    for (std::size_t k = 0; k < t.sites.size(); ++k) {
        const std::uint32_t bit = 1u << t.sites[k];
        switch (t.letters[k]) {
            case Pauli::X: ct.flip_mask |= bit; break;
            case Pauli::Y: ct.flip_mask |= bit; ct.y_mask |= bit; ++ct.y_count; break;
            case Pauli::Z: ct.z_mask |= bit; break;
        }
    }
    return ct;
}

// i^e for e in {0,1,2,3}
inline constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

// <source ^ flip | T | source>
inline Complex term_element(const CompiledTerm& t, std::uint32_t source) {
    const int z_down = popcount32(t.z_mask) - popcount32(source & t.z_mask);
    const int y_up = popcount32(source & t.y_mask);
    // sigma^y: up -> +i down, down -> -i up; each down Y contributes i^3.
    const int e = (y_up + 3 * (t.y_count - y_up)) & 3;
    const double sign = (z_down & 1) ? -t.coeff : t.coeff;
    return sign * kIPow[e];
}

inline double term_element_real(const CompiledTerm& t, std::uint32_t source) {
    const int z_down = popcount32(t.z_mask) - popcount32(source & t.z_mask);
    const int y_up = popcount32(source & t.y_mask);
    const int e = (y_up + 3 * (t.y_count - y_up)) & 3;
    double v = (z_down & 1) ? -t.coeff : t.coeff;
    return (e == 2) ? -v : v; // e is 0 or 2 for even-Y strings
}

} // namespace detail

// Applies a Sz-conserving Hamiltonian within one sector, term by term via
// bit operations; no dense matrix is formed. Z-only terms are folded into a
// precomputed diagonal.
class SectorApplier {
public:
    SectorApplier(const HamiltonianSpec& spec, const SectorBasis& basis)
        : basis_(&basis), real_ok_(is_real_in_product_basis(spec)) {
        if (!conserves_sz(spec))
            throw domain_error("SectorApplier: spec must conserve total Sz");
        if (spec.n_sites != basis.n_sites)
            throw domain_error("SectorApplier: spec/basis size mismatch");
        for (const auto& t : spec.terms) {
            auto ct = detail::compile_term(t);
            if (ct.flip_mask == 0)
                diag_terms_.push_back(ct);
            else
                offdiag_.push_back(ct);
        }
        diag_.assign(basis.size(), 0.0);
        for (std::size_t r = 0; r < basis.size(); ++r) {
            double d = 0.0;
            for (const auto& t : diag_terms_)
                d += detail::term_element_real(t, basis.states[r]);
            diag_[r] = d;
        }
    }

    std::size_t dim() const { return basis_->size(); }
    bool real_ok() const { return real_ok_; }
    const SectorBasis& basis() const { return *basis_; }

    // out[r] = sum_c H(r,c) in[c]; each output element is owned by exactly
    // one worker and summed in fixed term order, so the result is identical
    // for any worker count.
    template <typename Scalar>
    void apply(const Scalar* in, Scalar* out, int workers = 1) const {
        const auto& states = basis_->states;
        const int n_up = basis_->n_up;
        auto row_range = [&](std::size_t lo, std::size_t hi) {
            for (std::size_t r = lo; r < hi; ++r) {
                const std::uint32_t m_out = states[r];
                Scalar acc = static_cast<Scalar>(diag_[r]) * in[r];
                for (const auto& t : offdiag_) {
                    const std::uint32_t m_in = m_out ^ t.flip_mask;
                    if (popcount32(m_in) != n_up) continue;
                    const std::size_t c = basis_->rank(m_in);
                    if constexpr (std::is_same_v<Scalar, double>)
                        acc += detail::term_element_real(t, m_in) * in[c];
                    else
                        acc += detail::term_element(t, m_in) * in[c];
                }
                out[r] = acc;
            }
        };
        if constexpr (std::is_same_v<Scalar, double>) {
            if (!real_ok_)
                throw domain_error("SectorApplier: complex-valued Hamiltonian needs complex vectors");
        }
        const std::size_t n = states.size();
        if (workers <= 1 || n < 4096) {
            row_range(0, n);
            return;
        }
        const std::size_t blocks = std::min<std::size_t>(workers, n);
        parallel_for_index(blocks, static_cast<int>(blocks), [&](std::size_t b) {
            row_range(n * b / blocks, n * (b + 1) / blocks);
        });
    }

private:
    const SectorBasis* basis_;
    std::vector<detail::CompiledTerm> offdiag_;
    std::vector<detail::CompiledTerm> diag_terms_;
    std::vector<double> diag_;
    bool real_ok_;
};

template <typename Scalar>
std::vector<Scalar> apply_hamiltonian(const HamiltonianSpec& spec, const SectorBasis& basis,
                                      std::span<const Scalar> v) {
    if (v.size() != basis.size())
        throw domain_error("apply_hamiltonian: vector length does not match basis");
    SectorApplier ap(spec, basis);
    std::vector<Scalar> out(v.size());
    ap.apply(v.data(), out.data());
    return out;
}

inline std::vector<double> apply_hamiltonian(const HamiltonianSpec& spec, const SectorBasis& basis,
                                             const std::vector<double>& v) {
    return apply_hamiltonian<double>(spec, basis, std::span<const double>(v));
}

inline std::vector<Complex> apply_hamiltonian(const HamiltonianSpec& spec, const SectorBasis& basis,
                                              const std::vector<Complex>& v) {
    return apply_hamiltonian<Complex>(spec, basis, std::span<const Complex>(v));
}

// Dense realization of the sector block (test oracle and small-sector path).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense_sector_matrix(const SectorApplier& ap) {
    const auto& basis = ap.basis();
    const std::size_t n = basis.size();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(n, n);
    std::vector<Scalar> e(n, Scalar(0)), col(n);
    for (std::size_t c = 0; c < n; ++c) {
        e[c] = Scalar(1);
        ap.apply(e.data(), col.data());
        for (std::size_t r = 0; r < n; ++r) out(r, c) = col[r];
        e[c] = Scalar(0);
    }
    return out;
}

struct LanczosOptions {
    double tol = 1e-10;    // accept when ||Hx - Ex|| <= tol * max(1, |E|)
    int max_basis = 220;   // restart width (full reorthogonalization)
    long max_iterations = -1; // default 5*sqrt(dim) + 200 matvecs
    std::uint64_t seed = 0x5eedba5eu;
};

template <typename Scalar>
struct LanczosOutcome {
    double value = 0.0;
    Eigen::VectorX<Scalar> vector;
    double residual = std::numeric_limits<double>::infinity();
    long iterations = 0;
};

namespace detail {

template <typename Scalar>
Eigen::VectorX<Scalar> deterministic_vector(std::size_t dim, std::uint64_t seed) {
    Eigen::VectorX<Scalar> v(dim);
    std::uint64_t state = seed;
    for (std::size_t i = 0; i < dim; ++i) {
        const double u1 = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53 - 0.5;
        if constexpr (std::is_same_v<Scalar, double>) {
            v[i] = u1;
        } else {
            const double u2 = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53 - 0.5;
            v[i] = Complex(u1, u2);
        }
    }
    return v;
}

} // namespace detail

// Lanczos for the lowest eigenpair with full reorthogonalization (two CGS
// passes per step) and restarts when the stored basis reaches max_basis.
// `deflate` vectors are projected out throughout, which turns the solver
// into one for the lowest eigenpair orthogonal to them.
template <typename Scalar, typename MatVec>
LanczosOutcome<Scalar> lanczos_lowest(std::size_t dim, MatVec&& matvec, const LanczosOptions& opt = {},
                                      const std::vector<Eigen::VectorX<Scalar>>* deflate = nullptr) {
    using Vec = Eigen::VectorX<Scalar>;
    if (dim == 0) throw domain_error("lanczos_lowest: empty space");
    const long cap = opt.max_iterations > 0
                         ? opt.max_iterations
                         : static_cast<long>(5.0 * std::sqrt(static_cast<double>(dim))) + 200;

    auto project_out = [&](Vec& w, const std::vector<Vec>& basis) {
        for (const auto& u : basis) w -= u * u.dot(w);
        if (deflate)
            for (const auto& u : *deflate) w -= u * u.dot(w);
    };

    std::vector<Vec> V;
    std::vector<double> alphas, betas;
    double scale = 1.0;

    Vec v0 = detail::deterministic_vector<Scalar>(dim, opt.seed);
    if (deflate)
        for (const auto& u : *deflate) v0 -= u * u.dot(v0);
    v0.normalize();
    V.push_back(std::move(v0));

    long iters = 0;
    std::uint64_t salt = 1;
    LanczosOutcome<Scalar> best;

    auto ritz_pair = [&](double& theta, Vec& x) {
        const int m = static_cast<int>(alphas.size());
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
        for (int k = 0; k < m; ++k) {
            T(k, k) = alphas[k];
            if (k + 1 < m) T(k, k + 1) = T(k + 1, k) = betas[k];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        theta = es.eigenvalues()(0);
        const auto y = es.eigenvectors().col(0);
        x = Vec::Zero(dim);
        for (int k = 0; k < m; ++k) x += Scalar(y(k)) * V[k];
        project_out(x, {});
        const double nx = x.norm();
        if (nx > 0) x /= nx;
        return std::abs(y(m - 1));
    };

    while (true) {
        const std::size_t m = V.size() - 1;
        Vec w(dim);
        matvec(V[m].data(), w.data());
        ++iters;
        if (m > 0) w -= Scalar(betas[m - 1]) * V[m - 1];
        const double alpha = std::real(static_cast<Complex>(V[m].dot(w)));
        w -= Scalar(alpha) * V[m];
        for (int pass = 0; pass < 2; ++pass) project_out(w, V);
        const double beta = w.norm();
        alphas.push_back(alpha);
        scale = std::max({scale, std::abs(alpha), beta});

        const bool breakdown = beta <= 1e-13 * scale;
        const bool full = V.size() >= static_cast<std::size_t>(opt.max_basis);
        const bool at_cap = iters >= cap;
        if (breakdown || full || at_cap || alphas.size() % 8 == 0) {
            double theta = 0.0;
            Vec x;
            const double ylast = ritz_pair(theta, x);
            const double tol_abs = opt.tol * std::max(1.0, std::abs(theta));
            if (beta * ylast <= 8 * tol_abs || breakdown || full || at_cap) {
                Vec hx(dim);
                matvec(x.data(), hx.data());
                ++iters;
                const double value = std::real(static_cast<Complex>(x.dot(hx)));
                const double resid = (hx - Scalar(value) * x).norm();
                if (resid < best.residual) {
                    best.value = value;
                    best.vector = x;
                    best.residual = resid;
                }
                if (resid <= opt.tol * std::max(1.0, std::abs(value))) {
                    best.iterations = iters;
                    return best;
                }
                if (at_cap)
                    throw numerical_error("lanczos_lowest: iteration cap reached (best residual " +
                                              std::to_string(best.residual) + ")",
                                          best.residual);
                if (full) { // restart from the current Ritz vector
                    V.clear();
                    alphas.clear();
                    betas.clear();
                    V.push_back(std::move(x));
                    continue;
                }
            }
            if (at_cap)
                throw numerical_error("lanczos_lowest: iteration cap reached (best residual " +
                                          std::to_string(best.residual) + ")",
                                      best.residual);
        }

        if (breakdown) {
            // The Krylov space closed on an invariant subspace; start a new
            // block from a fresh vector (zero coupling keeps T consistent).
            Vec f = detail::deterministic_vector<Scalar>(dim, opt.seed + 0x9e37 * (++salt));
            for (int pass = 0; pass < 2; ++pass) project_out(f, V);
            const double nf = f.norm();
            if (nf <= 1e-12) {
                // Space exhausted: the Ritz value is exact.
                double theta = 0.0;
                Vec x;
                ritz_pair(theta, x);
                Vec hx(dim);
                matvec(x.data(), hx.data());
                ++iters;
                const double value = std::real(static_cast<Complex>(x.dot(hx)));
                best.value = value;
                best.vector = x;
                best.residual = (hx - Scalar(value) * x).norm();
                best.iterations = iters;
                return best;
            }
            V.push_back(f / nf);
            betas.push_back(0.0);
        } else {
            V.push_back(w / beta);
            betas.push_back(beta);
        }
    }
}

// Lowest eigenpair of a quantum ground-state search: energy, the sector the
// state lives in, its amplitudes over that sector's basis, and degeneracy
// diagnostics from the all-sector scan.
struct GroundState {
    int n_sites = 0;
    int n_up = 0;
    double energy = 0.0;
    std::shared_ptr<const SectorBasis> basis;
    std::vector<Complex> amplitudes;
    double residual = 0.0;
    bool degenerate = false;
    std::vector<int> tied_sectors; // sectors whose minimum ties the global one
    double sector_gap = std::numeric_limits<double>::infinity(); // E1 - E0 in the winning sector

    double energy_per_site() const { return energy / n_sites; }
};

namespace detail {

struct SectorScanEntry {
    double e0 = std::numeric_limits<double>::infinity();
    double e1 = std::numeric_limits<double>::infinity(); // valid for dense sectors
    bool have_e1 = false;
    std::vector<Complex> vec;
    double residual = 0.0;
};

template <typename Scalar>
void solve_sector_impl(const HamiltonianSpec& spec, const SectorBasis& basis, SectorScanEntry& out,
                       int matvec_workers) {
    SectorApplier ap(spec, basis);
    const std::size_t dim = basis.size();
    if (dim <= kDenseThreshold) {
        auto H = dense_sector_matrix<Scalar>(ap);
        Eigen::SelfAdjointEigenSolver<decltype(H)> es(H);
        if (es.info() != Eigen::Success)
            throw numerical_error("ground_state: dense eigensolver failed");
        out.e0 = es.eigenvalues()(0);
        out.e1 = dim > 1 ? es.eigenvalues()(1) : std::numeric_limits<double>::infinity();
        out.have_e1 = true;
        out.vec.resize(dim);
        for (std::size_t r = 0; r < dim; ++r) out.vec[r] = Complex(es.eigenvectors()(r, 0));
        // dense residual is at rounding level; record it explicitly
        std::vector<Scalar> v(dim), hv(dim);
        for (std::size_t r = 0; r < dim; ++r) v[r] = static_cast<Scalar>(es.eigenvectors()(r, 0));
        ap.apply(v.data(), hv.data());
        double rs = 0.0;
        for (std::size_t r = 0; r < dim; ++r) {
            const auto d = hv[r] - static_cast<Scalar>(out.e0) * v[r];
            rs += std::norm(Complex(d));
        }
        out.residual = std::sqrt(rs);
        return;
    }
    LanczosOptions opt;
    opt.seed = 0x5eedba5eu ^ (static_cast<std::uint64_t>(basis.n_sites) << 32) ^
               static_cast<std::uint64_t>(basis.n_up);
    auto mv = [&](const Scalar* in, Scalar* o) { ap.apply(in, o, matvec_workers); };
    auto res = lanczos_lowest<Scalar>(dim, mv, opt);
    out.e0 = res.value;
    out.residual = res.residual;
    out.vec.resize(dim);
    for (std::size_t r = 0; r < dim; ++r) out.vec[r] = Complex(res.vector[r]);
}

template <typename Scalar>
double second_eigenvalue(const HamiltonianSpec& spec, const SectorBasis& basis,
                         const std::vector<Complex>& ground, int matvec_workers) {
    SectorApplier ap(spec, basis);
    const std::size_t dim = basis.size();
    std::vector<Eigen::VectorX<Scalar>> deflate(1);
    deflate[0].resize(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        if constexpr (std::is_same_v<Scalar, double>)
            deflate[0][r] = ground[r].real();
        else
            deflate[0][r] = ground[r];
    }
    deflate[0].normalize();
    LanczosOptions opt;
    opt.seed = 0xdef1a7edULL ^ (static_cast<std::uint64_t>(basis.n_sites) << 32) ^
               static_cast<std::uint64_t>(basis.n_up);
    auto mv = [&](const Scalar* in, Scalar* o) { ap.apply(in, o, matvec_workers); };
    return lanczos_lowest<Scalar>(dim, mv, opt, &deflate).value;
}

} // namespace detail

// Scans every Sz sector, solves each for its lowest eigenpair (dense at or
// below kDenseThreshold, Lanczos above) and returns the global minimum.
// Tie-break across degenerate sectors: smallest |2 n_up - N|, then smaller
// n_up. A multi-sector tie or an in-sector gap below 1e-10 sets the
// `degenerate` flag; downstream observables refuse flagged states.
inline GroundState ground_state(const HamiltonianSpec& spec, int workers = 1) {
    if (!conserves_sz(spec))
        throw domain_error("ground_state: spec must conserve total Sz");
    const int N = spec.n_sites;
    if (N < 1 || N > kMaxSites)
        throw resource_error("ground_state: n_sites out of range");
    const bool real_path = is_real_in_product_basis(spec);

    std::vector<detail::SectorScanEntry> entries(N + 1);
    std::vector<std::shared_ptr<const SectorBasis>> bases(N + 1);
    parallel_for_index(static_cast<std::size_t>(N) + 1, workers, [&](std::size_t k) {
        auto basis = std::make_shared<SectorBasis>(enumerate_sector(N, static_cast<int>(k)));
        if (real_path)
            detail::solve_sector_impl<double>(spec, *basis, entries[k], 1);
        else
            detail::solve_sector_impl<Complex>(spec, *basis, entries[k], 1);
        bases[k] = std::move(basis);
    });

    double e_min = std::numeric_limits<double>::infinity();
    for (const auto& e : entries) e_min = std::min(e_min, e.e0);

    std::vector<int> tied;
    for (int k = 0; k <= N; ++k)
        if (entries[k].e0 <= e_min + kDegeneracyTol) tied.push_back(k);

    int winner = tied.front();
    for (int k : tied) {
        const int bal_k = std::abs(2 * k - N);
        const int bal_w = std::abs(2 * winner - N);
        if (bal_k < bal_w || (bal_k == bal_w && k < winner)) winner = k;
    }

    auto& win = entries[winner];
    double gap = std::numeric_limits<double>::infinity();
    if (win.have_e1) {
        gap = win.e1 - win.e0;
    } else if (bases[winner]->size() > 1) {
        const double e1 = real_path
                              ? detail::second_eigenvalue<double>(spec, *bases[winner], win.vec, 1)
                              : detail::second_eigenvalue<Complex>(spec, *bases[winner], win.vec, 1);
        gap = e1 - win.e0;
    }

    GroundState gs;
    gs.n_sites = N;
    gs.n_up = winner;
    gs.energy = win.e0;
    gs.basis = bases[winner];
    gs.amplitudes = std::move(win.vec);
    gs.residual = win.residual;
    gs.tied_sectors = tied;
    gs.sector_gap = gap;
    gs.degenerate = tied.size() > 1 || gap <= kDegeneracyTol;

    double norm2 = 0.0;
    for (const auto& a : gs.amplitudes) norm2 += std::norm(a);
    const double norm = std::sqrt(norm2);
    if (std::abs(norm - 1.0) > 1e-12)
        for (auto& a : gs.amplitudes) a /= norm;
    return gs;
}

} // namespace spinchain

#endif
