#ifndef HTMP_LINALG_HPP
#define HTMP_LINALG_HPP

#include <vector>

#include "htmp/rng.hpp"

namespace htmp::linalg {

// Dense square matrix, row major.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, 0.0) {}

    int n() const { return n_; }
    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }
    double* row(int i) { return a_.data() + static_cast<size_t>(i) * n_; }
    const double* row(int i) const { return a_.data() + static_cast<size_t>(i) * n_; }

private:
    int n_ = 0;
    std::vector<double> a_;
};

// Reduce a symmetric matrix to tridiagonal form (Householder); A is
// destroyed. diag gets n entries, off gets n-1.
void householder_tridiagonalize(Matrix& a, std::vector<double>& diag,
                                std::vector<double>& off);

// All eigenvalues of a symmetric tridiagonal matrix by Sturm bisection,
// ascending; abs_tol <= 0 selects 1e-10 * (Gershgorin radius).
std::vector<double> tridiag_eigenvalues_sturm(const std::vector<double>& diag,
                                              const std::vector<double>& off,
                                              double abs_tol = 0.0);

// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the R
// diagonal sign fixed positive.
Matrix haar_orthogonal(int n, RngStream& rng);

// C = B * B^T (symmetric product), row-parallel.
Matrix gram(const Matrix& b);

// Solve A x = rhs for symmetric positive definite A via Cholesky;
// A is overwritten by its factor.
std::vector<double> cholesky_solve(Matrix& a, std::vector<double> rhs);

} // namespace htmp::linalg

#endif
