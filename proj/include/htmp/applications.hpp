#ifndef HTMP_APPLICATIONS_HPP
#define HTMP_APPLICATIONS_HPP

#include <span>
#include <string>
#include <vector>

#include "htmp/estimators.hpp"
#include "htmp/rng.hpp"

namespace htmp::applications {

enum class FeatureKind { Activation, Ntk };

// Inverse-Wishart master density parameters (det M)^{-alpha} e^{-beta tr(Sigma M^{-1})}.
struct MasterParams {
    double rho = 1.0;      // temperature ratio tau/eta
    double m_out = 1.0;    // output dimension (activation case)
    double sigma2 = 1.0;   // prior variance
    double alpha_master = 0.0;
    double beta_master = 0.0;
};

MasterParams master_to_ensemble(FeatureKind kind, double rho, double m_out,
                                double sigma2);

// gamma = (kappa/2) / (alpha - kappa/2 - 1); requires alpha > kappa + 1 so
// that gamma lands in (0, 1).
double gamma_from_master(double alpha_master, double kappa);

struct ScalingReport {
    std::vector<double> lambda_grid;   // positive, decreasing
    std::vector<double> error_values;  // f(lambda) = lambda^2 S'(-lambda)
    double fitted_slope = 0.0;
    double candidate_a = 0.0;          // 2 + k/2g - k/2
    double candidate_b = 0.0;          // 2 + k/2 - k/2g
    std::string matched;               // "a", "b", "both", "none"
};

ScalingReport scaling_error_curve(double gamma, double kappa,
                                  std::span<const double> lambda_grid);

struct GradTailReport {
    double ks = 1.0;
    double lower_slope = 0.0;
    double upper_index = 0.0;
    int n_samples = 0;
};

GradTailReport gradient_norm_tail_check(int n, int d, int n_samples,
                                        RngStream rng);

enum class PhaseLabel {
    RandomLike,
    BleedingOut,
    BulkSpikes,
    BulkDecay,
    HeavyTailed,
    RankCollapse,
};

const char* phase_name(PhaseLabel label);

// Classifier thresholds; defaults reproduce the synthetic phase sequence.
struct PhaseOptions {
    double rank_collapse_fraction = 0.10;
    double rank_collapse_ratio = 1e-8;
    double spike_factor = 1.05;
    double bleed_factor = 1.25;
    double mp_like_kappa = 20.0;
    double bulk_decay_kappa = 3.0;
};

struct PhaseReport {
    PhaseLabel label = PhaseLabel::RandomLike;
    estimators::FitReport fit;
    int spikes = 0;
};

PhaseReport classify_phase(std::span<const double> values,
                           const PhaseOptions& opt = {});

} // namespace htmp::applications

#endif
