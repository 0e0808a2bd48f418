// Test-side oracles, kept independent of the library's quadrature and
// special-function paths.
#ifndef HTMP_TESTS_ORACLES_HPP
#define HTMP_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

// Plain adaptive Simpson (recursive bisection on the classic error gauge).
inline double simpson_rec(const std::function<double(double)>& f, double a,
                          double b, double fa, double fm, double fb,
                          double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-11, int depth = 44) {
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Integral over [a, inf) via the t = 1/x substitution past `split`.
inline double integrate_inf(const std::function<double(double)>& f, double a,
                            double split, double tol = 1e-11) {
    double head = integrate(f, a, split, tol);
    auto g = [&](double t) {
        if (t <= 0.0) return 0.0;
        double x = 1.0 / t;
        return f(x) * x * x;
    };
    double tail = integrate(g, 1e-14, 1.0 / split, tol);
    return head + tail;
}

// Term-by-term Kummer series in extended precision.
inline long double kummer_series_ld(long double a, long double b,
                                    long double z, int terms = 400) {
    long double sum = 1.0L, term = 1.0L;
    for (int k = 0; k < terms; ++k) {
        term *= (a + k) * z / ((b + k) * (k + 1));
        sum += term;
        if (std::abs((double)term) < 1e-22 * std::abs((double)sum)) break;
    }
    return sum;
}

// Central finite difference.
inline double central_diff(const std::function<double(double)>& f, double x,
                           double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Simple least-squares slope of y on x.
inline double ls_slope(const std::vector<double>& x,
                       const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t n = x.size();
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Jacobi eigenvalue iteration for small symmetric matrices (row-major).
inline std::vector<double> jacobi_eigenvalues(std::vector<double> a, int n,
                                              int sweeps = 60) {
    for (int s = 0; s < sweeps; ++s) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a[i * n + j] * a[i * n + j];
        if (off < 1e-26) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                double apq = a[p * n + q];
                if (std::abs(apq) < 1e-300) continue;
                double theta = 0.5 * (a[q * n + q] - a[p * n + p]) / apq;
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0), sn = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a[k * n + p], akq = a[k * n + q];
                    a[k * n + p] = c * akp - sn * akq;
                    a[k * n + q] = sn * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a[p * n + k], aqk = a[q * n + k];
                    a[p * n + k] = c * apk - sn * aqk;
                    a[q * n + k] = sn * apk + c * aqk;
                }
            }
    }
    std::vector<double> eig(n);
    for (int i = 0; i < n; ++i) eig[i] = a[i * n + i];
    std::sort(eig.begin(), eig.end());
    return eig;
}

} // namespace oracles

#endif
