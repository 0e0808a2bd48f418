#include "htmp/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <format>

#include "htmp/linalg.hpp"
#include "htmp/parallel.hpp"

namespace htmp::sampler {

void EnsembleSpec::validate() const {
    if (n < 2) throw contract_error("EnsembleSpec: n must be at least 2");
    if (!(beta_ens > 0.0)) throw contract_error("EnsembleSpec: beta_ens must be positive");
    if (!(scale > 0.0)) throw contract_error("EnsembleSpec: scale must be positive");
    double a = chi_a();
    if (!(a - beta_ens * (n - 1) > 0.0))
        throw contract_error("EnsembleSpec: chi dof a - beta (i-1) not positive");
}

Tridiag laguerre_beta_tridiag(const EnsembleSpec& spec, RngStream& rng) {
    spec.validate();
    const int n = spec.n;
    const double a = spec.chi_a();
    std::vector<double> d(n), t(n - 1);
    for (int i = 0; i < n; ++i) d[i] = rng.chi(a - spec.beta_ens * i);
    for (int i = 0; i < n - 1; ++i) t[i] = rng.chi(spec.beta_ens * (n - 1 - i));

    // Gram pairing of the chi bidiagonal: D_1 = d_1^2,
    // D_i = d_i^2 + t_{i-1}^2, E_i = d_i t_i.
    Tridiag out;
    out.diag.resize(n);
    out.off.resize(n - 1);
    out.diag[0] = d[0] * d[0];
    for (int i = 1; i < n; ++i) out.diag[i] = d[i] * d[i] + t[i - 1] * t[i - 1];
    for (int i = 0; i < n - 1; ++i) out.off[i] = d[i] * t[i];
    return out;
}

std::vector<double> tridiag_eigenvalues(const Tridiag& t) {
    return linalg::tridiag_eigenvalues_sturm(t.diag, t.off);
}

EigenSample sample_laguerre_beta_eigs(const EnsembleSpec& spec, RngStream rng) {
    Tridiag t = laguerre_beta_tridiag(spec, rng);
    EigenSample s;
    s.values = tridiag_eigenvalues(t);
    for (double& v : s.values) v *= spec.scale;
    s.meta = {rng.seed(), rng.stream_id(),
              std::format("laguerre(n={},beta={},alpha={},scale={})", spec.n,
                          spec.beta_ens, spec.shape_alpha, spec.scale)};
    return s;
}

EnsembleSpec htmp_ensemble_spec(int n, double gamma, double kappa) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw contract_error("htmp_ensemble_spec: gamma must be in (0, 1)");
    if (!(kappa > 0.0 && std::isfinite(kappa)))
        throw contract_error("htmp_ensemble_spec: kappa must be positive finite");
    if (!(kappa * (1.0 / gamma - 1.0) > 0.0))
        throw contract_error("htmp_ensemble_spec: kappa (1/gamma - 1) must be positive");
    EnsembleSpec spec;
    spec.n = n;
    spec.beta_ens = kappa / n;
    spec.shape_alpha = kappa * (1.0 / gamma - 1.0) - 2.0;
    spec.scale = gamma / kappa;
    return spec;
}

EnsembleSpec mp_ensemble_spec(int n, double gamma) {
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw contract_error("mp_ensemble_spec: gamma must be in (0, 1]");
    int d = std::max(n + 2, static_cast<int>(std::lround(n / gamma)));
    EnsembleSpec spec;
    spec.n = n;
    spec.beta_ens = 1.0;
    spec.shape_alpha = static_cast<double>(d - n - 1);
    spec.scale = 1.0 / d;
    return spec;
}

EigenSample sample_htmp_esd(int n, double gamma, double kappa, RngStream rng) {
    EigenSample s = sample_laguerre_beta_eigs(htmp_ensemble_spec(n, gamma, kappa),
                                              rng);
    s.meta.source = std::format("htmp(n={},gamma={},kappa={})", n, gamma, kappa);
    return s;
}

EigenSample sample_mp_esd(int n, double gamma, RngStream rng) {
    EigenSample s = sample_laguerre_beta_eigs(mp_ensemble_spec(n, gamma), rng);
    s.meta.source = std::format("mp(n={},gamma={})", n, gamma);
    return s;
}

std::vector<double> invert_and_rescale(std::span<const double> values,
                                       double scale) {
    if (!(scale > 0.0)) throw contract_error("invert_and_rescale: scale must be positive");
    std::vector<double> out(values.size());
    for (size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0))
            throw contract_error("invert_and_rescale: values must be positive");
        out[i] = scale / values[i];
    }
    std::sort(out.begin(), out.end());
    return out;
}

EigenSample sample_inverse_esd(int n, double gamma, double kappa,
                               double alpha_master, double beta_master,
                               RngStream rng) {
    if (!(alpha_master > kappa + 1.0))
        throw contract_error("sample_inverse_esd: requires alpha_master > kappa + 1");
    if (!(beta_master > 0.0))
        throw contract_error("sample_inverse_esd: beta_master must be positive");
    double derived = 0.5 * kappa / (alpha_master - 0.5 * kappa - 1.0);
    if (std::abs(derived - gamma) > 1e-6 * std::max(1.0, std::abs(gamma)))
        throw contract_error("sample_inverse_esd: gamma inconsistent with (alpha_master, kappa)");
    EigenSample base = sample_htmp_esd(n, gamma, kappa, rng);
    EigenSample out;
    out.values = invert_and_rescale(base.values,
                                    2.0 * gamma * beta_master / kappa);
    out.meta = base.meta;
    out.meta.source = std::format("inverse(n={},gamma={},kappa={},alpha={},beta={})",
                                  n, gamma, kappa, alpha_master, beta_master);
    return out;
}

EigenSample conjugate_with_covariance(const EigenSample& eigs,
                                      std::span<const double> sigma_eigs,
                                      RngStream rng) {
    const int n = static_cast<int>(eigs.values.size());
    if (static_cast<int>(sigma_eigs.size()) != n)
        throw contract_error("conjugate_with_covariance: dimension mismatch");
    for (double s : sigma_eigs)
        if (!(s > 0.0))
            throw contract_error("conjugate_with_covariance: sigma eigenvalues must be positive");

    linalg::Matrix q = linalg::haar_orthogonal(n, rng);
    // B = Sigma^{1/2} Q Lambda^{1/2}; the conjugated matrix is B B^T
    for (int i = 0; i < n; ++i) {
        double rs = std::sqrt(sigma_eigs[i]);
        for (int j = 0; j < n; ++j)
            q(i, j) *= rs * std::sqrt(std::max(eigs.values[j], 0.0));
    }
    linalg::Matrix c = linalg::gram(q);
    std::vector<double> d, e;
    linalg::householder_tridiagonalize(c, d, e);
    EigenSample out;
    out.values = linalg::tridiag_eigenvalues_sturm(d, e);
    out.meta = eigs.meta;
    out.meta.source = "conjugated(" + eigs.meta.source + ")";
    return out;
}

std::vector<double> wishart_quadratic_form(int n, int d, int n_samples,
                                           RngStream rng) {
    if (d < n + 2)
        throw contract_error("wishart_quadratic_form: requires d >= n + 2");
    if (n < 1 || n_samples < 1)
        throw contract_error("wishart_quadratic_form: sizes must be positive");
    std::vector<double> out(n_samples);
    parallel_for(static_cast<size_t>(n_samples), [&](size_t s) {
        RngStream sub = rng.substream(s);
        std::vector<double> xs(static_cast<size_t>(n) * d);
        for (auto& v : xs) v = sub.normal();
        linalg::Matrix w(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                double acc = 0.0;
                const double* xi = &xs[static_cast<size_t>(i) * d];
                const double* xj = &xs[static_cast<size_t>(j) * d];
                for (int k = 0; k < d; ++k) acc += xi[k] * xj[k];
                w(i, j) = acc;
                w(j, i) = acc;
            }
        std::vector<double> z(n);
        for (auto& v : z) v = sub.normal();
        std::vector<double> y = linalg::cholesky_solve(w, z);
        double q = 0.0;
        for (int i = 0; i < n; ++i) q += z[i] * y[i];
        out[s] = q * (static_cast<double>(d - n + 1) / n);
    });
    return out;
}

} // namespace htmp::sampler
