#ifndef HTMP_ESTIMATORS_HPP
#define HTMP_ESTIMATORS_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "htmp/laws.hpp"
#include "htmp/rng.hpp"
#include "htmp/sampler.hpp"

namespace htmp::estimators {

// Structured-matrix classes with closed-form or estimated kappa*.
enum class StructureKind {
    Diagonal,
    CommutingBlockDiagonal,
    SymmetricBlockDiagonal,
    KroneckerLike,
    FullSymmetric,
    FreeEigenvectors,
};

enum class GridAssignment { RowMajor, ColumnMajor };

struct StructureSpec {
    StructureKind kind = StructureKind::Diagonal;
    int m = 1;       // block size
    int n = 1;       // block count
    int d_free = 0;  // FreeEigenvectors only
    GridAssignment assignment = GridAssignment::RowMajor;

    int matrix_size() const { return m * n; }
    void validate() const;
};

struct KappaEstimate {
    double kappa_star = 0.0;
    double beta_star = 0.0;
    int iterations = 0;
    double stderr_boot = 0.0;
    std::vector<double> trace;  // beta iterates
};

struct FitReport {
    std::string law;             // "htmp", "mp", "invgamma"
    double gamma = 0.0;
    double kappa = 0.0;          // +inf for the MP alternative
    double scale = 1.0;
    double alpha_ig = 0.0;       // inverse-Gamma family
    double beta_ig = 0.0;
    double ks = 1.0;
    double loglik = 0.0;
    int n_points = 0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    bool refined = true;         // false when the simplex never improved
};

// sup_x |ECDF - F| over the sample lattice, both one-sided evaluations.
double ks_statistic(std::span<const double> sorted_values,
                    const std::function<double(double)>& cdf);
double ks_statistic(std::span<const double> sorted_values,
                    const laws::SpectralLaw& law);

// Upper tail index from the top k order statistics.
double hill_estimator(std::span<const double> values, int k);

struct SlopeEstimate {
    double slope = 0.0;
    bool reliable = false;  // window spans enough of a log-decade
    int n_used = 0;
};

// Log-log slope of the ECDF over the bottom fraction of the sample.
SlopeEstimate lower_slope(std::span<const double> values, double fraction);

// Maximum-likelihood inverse-Gamma fit (Newton on the digamma equation of
// the reciprocal sample), optionally restricted below an upper quantile.
FitReport invgamma_mle(std::span<const double> values,
                       std::optional<double> window_quantile = std::nullopt);

// HTMP (and MP alternative) fit by coarse grid plus Nelder-Mead refinement
// of the KS distance; scale seeded by first-moment matching.
FitReport fit_htmp(std::span<const double> values);

// ln w(lambda) for the structure's Weyl factor. Ties are separated by a
// 1e-12 * range jitter.
double log_weight(const StructureSpec& s, std::span<const double> eigs);

// Closed forms of Table-1 type; Kronecker-like and commuting-block values
// are the empirical forms.
double closed_form_kappa(const StructureSpec& s);

struct FixedPointOptions {
    double beta0 = 0.0;        // <= 0 selects 5/N
    double step_gamma = 1.0;
    int max_iterations = 2000;
    int stderr_window = 20;
};

// Stochastic fixed-point iteration for kappa* = N beta*.
KappaEstimate estimate_kappa_fixed_point(const StructureSpec& s,
                                         double shape_alpha, int p,
                                         double step_gamma, double tol,
                                         RngStream rng,
                                         const FixedPointOptions& opt = {});

// Mean slope-estimator value at a fixed beta (the fixed-point map R(beta)).
double fixed_point_map(const StructureSpec& s, double shape_alpha, double beta,
                       int p, RngStream rng);

struct CandidatePoint {
    double m = 0.0, n = 0.0, kappa = 0.0;
};

struct CandidateFit {
    std::string form;            // "c1*(m-c2)", "c1*(m-c2)/n", "c*(n/m+m/n)", "c*N"
    double c1 = 0.0, c2 = 0.0;
    double residual = 0.0;
};

// Least squares over the fixed candidate dictionary; needs >= 6 points.
CandidateFit candidate_form_fit(std::span<const CandidatePoint> points);

} // namespace htmp::estimators

#endif
