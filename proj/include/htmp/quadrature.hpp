#ifndef HTMP_QUADRATURE_HPP
#define HTMP_QUADRATURE_HPP

#include <functional>

namespace htmp::quadrature {

struct Options {
    double rel_tol = 1e-9;
    double abs_tol = 1e-14;
    int max_depth = 40;
};

// Adaptive Gauss-Kronrod 15(7) on a finite interval.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const Options& opt = {});

// Integral over [lo, inf) using the x -> lo + t/(1-t) substitution for the
// tail beyond `split` (split <= lo means a heuristic split point).
double integrate_to_inf(const std::function<double(double)>& f, double lo,
                        double split = 0.0, const Options& opt = {});

// Single non-adaptive GK15 panel; err receives the Kronrod-Gauss gap.
double gk15(const std::function<double(double)>& f, double lo, double hi,
            double& err);

} // namespace htmp::quadrature

#endif
