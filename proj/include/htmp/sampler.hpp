#ifndef HTMP_SAMPLER_HPP
#define HTMP_SAMPLER_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "htmp/rng.hpp"

namespace htmp::sampler {

// Laguerre beta-ensemble of size n: eigenvalue weight lambda^{alpha/2}
// e^{-lambda/2} with repulsion exponent beta_ens between pairs; sampled
// eigenvalues are multiplied by scale.
struct EnsembleSpec {
    int n = 2;
    double beta_ens = 1.0;
    double shape_alpha = 0.0;
    double scale = 1.0;

    double chi_a() const { return shape_alpha + 2.0 + beta_ens * (n - 1); }
    void validate() const;
};

struct Tridiag {
    std::vector<double> diag;
    std::vector<double> off;
};

struct SampleMeta {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    std::string source;  // ensemble description or file path
};

struct EigenSample {
    std::vector<double> values;  // ascending
    SampleMeta meta;
};

// Tridiagonal model for the Laguerre beta-ensemble (chi-filled bidiagonal
// Gram matrix).
Tridiag laguerre_beta_tridiag(const EnsembleSpec& spec, RngStream& rng);

// All eigenvalues of a symmetric tridiagonal matrix (Sturm bisection in
// Gershgorin bounds), ascending.
std::vector<double> tridiag_eigenvalues(const Tridiag& t);

EigenSample sample_laguerre_beta_eigs(const EnsembleSpec& spec, RngStream rng);

// Parameter maps onto the limit laws.
EnsembleSpec htmp_ensemble_spec(int n, double gamma, double kappa);
EnsembleSpec mp_ensemble_spec(int n, double gamma);

EigenSample sample_htmp_esd(int n, double gamma, double kappa, RngStream rng);
EigenSample sample_mp_esd(int n, double gamma, RngStream rng);

// x -> scale / x, result sorted ascending.
std::vector<double> invert_and_rescale(std::span<const double> values,
                                       double scale);

// Feature-matrix eigenvalues under the inverse-Wishart master model:
// reciprocals of an HTMP(gamma, kappa) sample, rescaled by
// 2 gamma beta_master / kappa. Requires alpha_master > kappa + 1 and
// gamma consistent with (alpha_master, kappa).
EigenSample sample_inverse_esd(int n, double gamma, double kappa,
                               double alpha_master, double beta_master,
                               RngStream rng);

// Eigenvalues of Sigma^{1/2} Q Lambda Q^T Sigma^{1/2} with Q Haar.
EigenSample conjugate_with_covariance(const EigenSample& eigs,
                                      std::span<const double> sigma_eigs,
                                      RngStream rng);

// Scaled inverse-Wishart quadratic forms ((d-n+1)/n) Z^T (X X^T)^{-1} Z;
// F(n, d-n+1) distributed. Requires d >= n + 2.
std::vector<double> wishart_quadratic_form(int n, int d, int n_samples,
                                           RngStream rng);

} // namespace htmp::sampler

#endif
