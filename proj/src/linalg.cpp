#include "htmp/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "htmp/errors.hpp"
#include "htmp/parallel.hpp"

namespace htmp::linalg {

void householder_tridiagonalize(Matrix& a, std::vector<double>& diag,
                                std::vector<double>& off) {
    const int n = a.n();
    diag.assign(n, 0.0);
    off.assign(n > 0 ? n - 1 : 0, 0.0);
    if (n == 1) {
        diag[0] = a(0, 0);
        return;
    }
    std::vector<double> e(n, 0.0);
    for (int i = n - 1; i >= 1; --i) {
        int l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::abs(a(i, k));
            if (scale == 0.0) {
                e[i] = a(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    a(i, k) /= scale;
                    h += a(i, k) * a(i, k);
                }
                double f = a(i, l);
                double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                a(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
                    for (int k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
                    e[j] = g / h;
                    f += e[j] * a(i, j);
                }
                double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = a(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (int k = 0; k <= j; ++k)
                        a(j, k) -= f * e[k] + g * a(i, k);
                }
            }
        } else {
            e[i] = a(i, l);
        }
    }
    for (int i = 0; i < n; ++i) diag[i] = a(i, i);
    for (int i = 1; i < n; ++i) off[i - 1] = e[i];
}

namespace {

// Number of eigenvalues strictly below x (Sturm count via LDL^T pivots).
int sturm_count(const std::vector<double>& d, const std::vector<double>& e2,
                double x) {
    int count = 0;
    double q = d[0] - x;
    if (q < 0.0) ++count;
    const size_t n = d.size();
    for (size_t i = 1; i < n; ++i) {
        if (q == 0.0) q = -1e-300;
        q = d[i] - x - e2[i - 1] / q;
        if (q < 0.0) ++count;
    }
    return count;
}

} // namespace

std::vector<double> tridiag_eigenvalues_sturm(const std::vector<double>& diag,
                                              const std::vector<double>& off,
                                              double abs_tol) {
    const size_t n = diag.size();
    if (n == 0) return {};
    if (off.size() + 1 != n)
        throw contract_error("tridiag_eigenvalues: off-diagonal length mismatch");
    for (double v : diag)
        if (!std::isfinite(v)) throw contract_error("tridiag_eigenvalues: non-finite entry");
    for (double v : off)
        if (!std::isfinite(v)) throw contract_error("tridiag_eigenvalues: non-finite entry");
    if (n == 1) return {diag[0]};

    std::vector<double> e2(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) e2[i] = off[i] * off[i];

    double lo = diag[0], hi = diag[0];
    for (size_t i = 0; i < n; ++i) {
        double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) +
                   (i + 1 < n ? std::abs(off[i]) : 0.0);
        lo = std::min(lo, diag[i] - r);
        hi = std::max(hi, diag[i] + r);
    }
    double bound = std::max(std::abs(lo), std::abs(hi));
    if (abs_tol <= 0.0) abs_tol = 1e-10 * std::max(bound, 1e-300);

    std::vector<double> eigs(n);
    double running_lo = lo;
    for (size_t k = 0; k < n; ++k) {
        double a = running_lo, b = hi;
        // invariant: count(a) <= k < count(b)
        while (b - a > abs_tol) {
            double m = 0.5 * (a + b);
            if (m <= a || m >= b) break;
            if (sturm_count(diag, e2, m) > static_cast<int>(k))
                b = m;
            else
                a = m;
        }
        eigs[k] = 0.5 * (a + b);
        running_lo = a;  // eigenvalues are found in ascending order
    }
    std::sort(eigs.begin(), eigs.end());
    return eigs;
}

Matrix haar_orthogonal(int n, RngStream& rng) {
    Matrix a(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.normal();

    // Householder QR with reflectors kept in v (column k, rows k..n-1).
    Matrix v(n);
    std::vector<double> vnorm2(n, 0.0);
    std::vector<double> rsign(n, 1.0);
    const bool par = n >= 256;
    for (int k = 0; k < n; ++k) {
        double norm = 0.0;
        for (int i = k; i < n; ++i) norm += a(i, k) * a(i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        double alpha = a(k, k) >= 0.0 ? -norm : norm;
        rsign[k] = alpha > 0.0 ? 1.0 : -1.0;
        v(k, k) = a(k, k) - alpha;
        for (int i = k + 1; i < n; ++i) v(i, k) = a(i, k);
        double w2 = 0.0;
        for (int i = k; i < n; ++i) w2 += v(i, k) * v(i, k);
        vnorm2[k] = w2;
        if (w2 == 0.0) continue;
        const double inv = 2.0 / w2;
        auto apply_col = [&](size_t jj) {
            int j = k + static_cast<int>(jj);
            double dot = 0.0;
            for (int i = k; i < n; ++i) dot += v(i, k) * a(i, j);
            dot *= inv;
            for (int i = k; i < n; ++i) a(i, j) -= dot * v(i, k);
        };
        if (par)
            parallel_for(static_cast<size_t>(n - k), apply_col);
        else
            for (int j = 0; j < n - k; ++j) apply_col(static_cast<size_t>(j));
    }

    // Q = H_0 ... H_{n-1} I; while unwinding, columns j < k are still e_j
    // with no mass in rows >= k, so only columns j >= k move.
    Matrix q(n);
    for (int i = 0; i < n; ++i) q(i, i) = 1.0;
    for (int k = n - 1; k >= 0; --k) {
        if (vnorm2[k] == 0.0) continue;
        const double inv = 2.0 / vnorm2[k];
        auto apply_col = [&](size_t jj) {
            int j = k + static_cast<int>(jj);
            double dot = 0.0;
            for (int i = k; i < n; ++i) dot += v(i, k) * q(i, j);
            dot *= inv;
            for (int i = k; i < n; ++i) q(i, j) -= dot * v(i, k);
        };
        if (par)
            parallel_for(static_cast<size_t>(n - k), apply_col);
        else
            for (int j = 0; j < n - k; ++j) apply_col(static_cast<size_t>(j));
    }
    for (int k = 0; k < n; ++k)
        if (rsign[k] < 0.0)
            for (int i = 0; i < n; ++i) q(i, k) = -q(i, k);
    return q;
}

Matrix gram(const Matrix& b) {
    const int n = b.n();
    Matrix c(n);
    parallel_for(static_cast<size_t>(n), [&](size_t i) {
        for (size_t j = 0; j <= i; ++j) {
            const double* bi = b.row(static_cast<int>(i));
            const double* bj = b.row(static_cast<int>(j));
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += bi[k] * bj[k];
            c(static_cast<int>(i), static_cast<int>(j)) = s;
            c(static_cast<int>(j), static_cast<int>(i)) = s;
        }
    });
    return c;
}

std::vector<double> cholesky_solve(Matrix& a, std::vector<double> rhs) {
    const int n = a.n();
    for (int j = 0; j < n; ++j) {
        double s = a(j, j);
        for (int k = 0; k < j; ++k) s -= a(j, k) * a(j, k);
        if (!(s > 0.0))
            throw contract_error("cholesky_solve: matrix not positive definite");
        double ljj = std::sqrt(s);
        a(j, j) = ljj;
        for (int i = j + 1; i < n; ++i) {
            double t = a(i, j);
            for (int k = 0; k < j; ++k) t -= a(i, k) * a(j, k);
            a(i, j) = t / ljj;
        }
    }
    for (int i = 0; i < n; ++i) {
        double s = rhs[i];
        for (int k = 0; k < i; ++k) s -= a(i, k) * rhs[k];
        rhs[i] = s / a(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = rhs[i];
        for (int k = i + 1; k < n; ++k) s -= a(k, i) * rhs[k];
        rhs[i] = s / a(i, i);
    }
    return rhs;
}

} // namespace htmp::linalg
