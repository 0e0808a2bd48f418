#include "htmp/applications.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "htmp/laws.hpp"
#include "htmp/specfun.hpp"

namespace htmp::applications {

MasterParams master_to_ensemble(FeatureKind kind, double rho, double m_out,
                                double sigma2) {
    if (!(rho > 0.0) || !(sigma2 > 0.0) || !(m_out > 0.0))
        throw contract_error("master_to_ensemble: parameters must be positive");
    MasterParams p;
    p.rho = rho;
    p.m_out = m_out;
    p.sigma2 = sigma2;
    p.beta_master = 0.5 * rho * sigma2;
    p.alpha_master = kind == FeatureKind::Activation ? 0.5 * rho * m_out
                                                     : 0.5 * rho;
    return p;
}

double gamma_from_master(double alpha_master, double kappa) {
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw contract_error("gamma_from_master: kappa must be positive finite");
    if (!(alpha_master > 0.5 * kappa + 1.0))
        throw contract_error(
            "gamma_from_master: alpha <= kappa/2 + 1 puts gamma outside (0, inf)");
    if (!(alpha_master > kappa + 1.0))
        throw contract_error(
            "gamma_from_master: alpha <= kappa + 1 puts gamma at or above 1");
    return 0.5 * kappa / (alpha_master - 0.5 * kappa - 1.0);
}

ScalingReport scaling_error_curve(double gamma, double kappa,
                                  std::span<const double> lambda_grid) {
    laws::HTMPParams p{gamma, kappa};
    p.validate();
    if (p.infinite_kappa())
        throw contract_error("scaling_error_curve: requires finite kappa");
    if (lambda_grid.size() < 2)
        throw contract_error("scaling_error_curve: grid needs at least 2 points");
    for (size_t i = 0; i < lambda_grid.size(); ++i) {
        if (!(lambda_grid[i] > 0.0 && lambda_grid[i] <= 0.5))
            throw contract_error("scaling_error_curve: lambda outside (0, 0.5]");
        if (i > 0 && !(lambda_grid[i] < lambda_grid[i - 1]))
            throw contract_error("scaling_error_curve: grid must decrease");
    }

    ScalingReport r;
    r.lambda_grid.assign(lambda_grid.begin(), lambda_grid.end());
    r.error_values.resize(lambda_grid.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < lambda_grid.size(); ++i) {
        double lam = lambda_grid[i];
        double f = lam * lam * laws::stieltjes_derivative(-lam, p);
        r.error_values[i] = f;
        double lx = std::log(lam), ly = std::log(f);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(lambda_grid.size());
    r.fitted_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double h = p.rate(), k2 = 0.5 * kappa;
    r.candidate_a = 2.0 + h - k2;
    r.candidate_b = 2.0 + k2 - h;
    auto match = [&](double c) {
        return std::abs(r.fitted_slope - c) <= 0.05 * std::abs(c);
    };
    bool ma = match(r.candidate_a), mb = match(r.candidate_b);
    r.matched = ma && mb ? "both" : ma ? "a" : mb ? "b" : "none";
    return r;
}

GradTailReport gradient_norm_tail_check(int n, int d, int n_samples,
                                        RngStream rng) {
    std::vector<double> q = sampler::wishart_quadratic_form(n, d, n_samples, rng);
    std::sort(q.begin(), q.end());
    const double nu1 = n, nu2 = d - n + 1;
    auto fcdf = [&](double x) {
        if (x <= 0.0) return 0.0;
        return specfun::reg_inc_beta(0.5 * nu1, 0.5 * nu2,
                                     nu1 * x / (nu1 * x + nu2));
    };
    GradTailReport r;
    r.n_samples = n_samples;
    r.ks = estimators::ks_statistic(q, fcdf);
    r.lower_slope = estimators::lower_slope(q, 0.10).slope;
    r.upper_index = estimators::hill_estimator(q, std::max(20, n_samples / 20));
    return r;
}

const char* phase_name(PhaseLabel label) {
    switch (label) {
        case PhaseLabel::RandomLike: return "random_like";
        case PhaseLabel::BleedingOut: return "bleeding_out";
        case PhaseLabel::BulkSpikes: return "bulk_spikes";
        case PhaseLabel::BulkDecay: return "bulk_decay";
        case PhaseLabel::HeavyTailed: return "heavy_tailed";
        case PhaseLabel::RankCollapse: return "rank_collapse";
    }
    return "unclassified";
}

PhaseReport classify_phase(std::span<const double> values,
                           const PhaseOptions& opt) {
    if (values.size() < 100)
        throw contract_error("classify_phase: needs at least 100 eigenvalues");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const double vmax = v.back();
    if (!(vmax > 0.0))
        throw contract_error("classify_phase: spectrum has no positive mass");

    PhaseReport out;
    const double zero_cut = opt.rank_collapse_ratio * vmax;
    size_t zeros = std::lower_bound(v.begin(), v.end(), zero_cut) - v.begin();
    if (static_cast<double>(zeros) > opt.rank_collapse_fraction * v.size()) {
        out.label = PhaseLabel::RankCollapse;
        std::vector<double> bulk(v.begin() + zeros, v.end());
        if (bulk.size() >= 100) out.fit = estimators::fit_htmp(bulk);
        out.fit.law = out.fit.law.empty() ? "none" : out.fit.law;
        return out;
    }

    out.fit = estimators::fit_htmp(v);
    const bool mp_like =
        out.fit.law == "mp" || out.fit.kappa >= opt.mp_like_kappa;
    if (mp_like) {
        double edge = out.fit.scale *
                      laws::MPParams{std::min(out.fit.gamma, 1.0)}.edge_upper();
        double spike_cut = opt.spike_factor * edge;
        double bleed_cut = opt.bleed_factor * edge;
        int spikes = 0;
        bool beyond_bleed = false;
        for (auto it = v.rbegin(); it != v.rend() && *it > spike_cut; ++it) {
            ++spikes;
            if (*it > bleed_cut) beyond_bleed = true;
        }
        out.spikes = spikes;
        if (spikes == 0)
            out.label = PhaseLabel::RandomLike;
        else if (!beyond_bleed)
            out.label = PhaseLabel::BleedingOut;
        else
            out.label = PhaseLabel::BulkSpikes;
        return out;
    }
    out.label = out.fit.kappa >= opt.bulk_decay_kappa ? PhaseLabel::BulkDecay
                                                      : PhaseLabel::HeavyTailed;
    return out;
}

} // namespace htmp::applications
