#ifndef SPINCHAIN_LINALG_HPP
#define SPINCHAIN_LINALG_HPP

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

#include "spinchain/errors.hpp"

namespace spinchain {

using Complex = std::complex<double>;

// Small Hermitian matrix (density matrices and the concurrence R-matrix
// live here). Construction checks Hermiticity to 1e-12.
struct HermitianMatrix {
    Eigen::MatrixXcd m;

    HermitianMatrix() = default;

    explicit HermitianMatrix(Eigen::MatrixXcd mat) : m(std::move(mat)) {
        if (m.rows() != m.cols())
            throw domain_error("HermitianMatrix: matrix must be square");
        const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
        if (dev > 1e-12)
            throw domain_error("HermitianMatrix: not Hermitian (max deviation " +
                               std::to_string(dev) + ")");
    }

    int dimension() const { return static_cast<int>(m.rows()); }
    double trace() const { return m.trace().real(); }
};

struct EighResult {
    std::vector<double> eigenvalues; // descending
    Eigen::MatrixXcd eigenvectors;   // columns aligned with eigenvalues
};

// Dense Hermitian eigensolve for d <= 8, eigenvalues in descending order
// (the order the concurrence gamma-spectrum is defined in).
inline EighResult eigh_small(const HermitianMatrix& h) {
    const int d = h.dimension();
    if (d > 8) throw domain_error("eigh_small: dimension must be <= 8");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.m);
    if (solver.info() != Eigen::Success)
        throw numerical_error("eigh_small: eigensolver failed");
    EighResult out;
    out.eigenvalues.resize(d);
    out.eigenvectors.resize(d, d);
    for (int k = 0; k < d; ++k) {
        out.eigenvalues[k] = solver.eigenvalues()(d - 1 - k);
        out.eigenvectors.col(k) = solver.eigenvectors().col(d - 1 - k);
    }
    return out;
}

} // namespace spinchain

#endif
