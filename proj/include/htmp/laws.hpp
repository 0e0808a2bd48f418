#ifndef HTMP_LAWS_HPP
#define HTMP_LAWS_HPP

#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "htmp/errors.hpp"

namespace htmp::laws {

// Marchenko-Pastur law with aspect ratio gamma in (0, 1].
struct MPParams {
    double gamma = 0.5;

    void validate() const;
    double edge_lower() const;  // (1 - sqrt(gamma))^2
    double edge_upper() const;  // (1 + sqrt(gamma))^2
};

// High-temperature Marchenko-Pastur law. kappa = +inf denotes the MP
// degenerate case and is rejected by the HTMP-only operations.
struct HTMPParams {
    double gamma = 0.5;
    double kappa = 2.0;

    void validate() const;
    bool infinite_kappa() const;
    double tricomi_a() const;     // kappa/2
    double tricomi_b() const;     // 1 + kappa/2 - kappa/(2 gamma)
    double rate() const;          // kappa/(2 gamma)
};

// Density proportional to x^{-alpha} e^{-beta/x}; normalizable for alpha > 1.
struct InvGammaParams {
    double alpha_ig = 2.0;
    double beta_ig = 1.0;

    void validate() const;
};

// Tail behavior of the inverse (feature-matrix) law: density ~ x^{-upper}
// at infinity and ~ x^{-lower} exp(-lower_rate / x) at zero.
struct TailReport {
    bool bounded_support = false;
    double upper_exponent = 0.0;
    double lower_exponent = 0.0;
    double lower_exp_rate = 0.0;
};

// A probability density on the real line with quadrature-backed CDF.
// The CDF evaluation grid is built once per instance and then reused.
class SpectralLaw {
public:
    virtual ~SpectralLaw() = default;

    virtual double pdf(double x) const = 0;
    virtual double support_lo() const = 0;
    virtual double support_hi() const = 0;  // +inf allowed

    virtual double cdf(double x) const;
    // CDF at ascending points in one sweep (much cheaper than repeated cdf()).
    virtual void cdf_many(std::span<const double> ascending,
                          std::span<double> out) const;
    double total_mass() const;

protected:
    struct Cache {
        std::vector<double> breaks;
        std::vector<double> cum;    // cum[i] = integral from lo to breaks[i]
        double total = 0.0;
    };
    const Cache& cache() const;
    // Upper integration cut for infinite-support laws.
    virtual double upper_cut() const;

private:
    mutable Cache cache_;
    mutable std::once_flag cache_once_;
};

class MpLaw final : public SpectralLaw {
public:
    explicit MpLaw(MPParams p);
    double pdf(double x) const override;
    double support_lo() const override;
    double support_hi() const override;
    const MPParams& params() const { return p_; }

private:
    MPParams p_;
};

class HtmpLaw final : public SpectralLaw {
public:
    explicit HtmpLaw(HTMPParams p);
    ~HtmpLaw() override;
    double pdf(double x) const override;
    double support_lo() const override { return 0.0; }
    double support_hi() const override;
    const HTMPParams& params() const { return p_; }

    // ln rho(x); usable far into the tails where pdf underflows.
    double log_pdf(double x) const;

private:
    double upper_cut() const override;
    double log_mod_u_sq(double z) const;  // ln |U(a, b, -z)|^2

    HTMPParams p_;
    struct OdeTable;
    mutable std::unique_ptr<OdeTable> ode_;
    mutable std::once_flag ode_once_;
    bool use_series_ = true;
};

// Law of 1/Y for Y ~ base: density x^{-2} base(1/x).
class InverseLaw final : public SpectralLaw {
public:
    explicit InverseLaw(std::shared_ptr<const SpectralLaw> base);
    double pdf(double x) const override;
    double support_lo() const override;
    double support_hi() const override;
    double cdf(double x) const override;
    void cdf_many(std::span<const double> ascending,
                  std::span<double> out) const override;

private:
    std::shared_ptr<const SpectralLaw> base_;
};

class InvGammaLaw final : public SpectralLaw {
public:
    explicit InvGammaLaw(InvGammaParams p);
    double pdf(double x) const override;
    double support_lo() const override { return 0.0; }
    double support_hi() const override;
    double cdf(double x) const override;  // via reg. incomplete gamma of 1/x
    void cdf_many(std::span<const double> ascending,
                  std::span<double> out) const override;
    const InvGammaParams& params() const { return p_; }

private:
    InvGammaParams p_;
};

// Law of c * Y for Y ~ base.
class ScaledLaw final : public SpectralLaw {
public:
    ScaledLaw(std::shared_ptr<const SpectralLaw> base, double scale);
    double pdf(double x) const override;
    double support_lo() const override;
    double support_hi() const override;
    double cdf(double x) const override;
    void cdf_many(std::span<const double> ascending,
                  std::span<double> out) const override;

private:
    std::shared_ptr<const SpectralLaw> base_;
    double scale_;
};

TailReport tail_exponents(const HTMPParams& p);

// Stieltjes transform S(z) = int rho(x)/(x - z) dx for real z < 0, and its
// derivative in z. Both are positive there; z S(z) -> -1 as z -> -inf.
double stieltjes(double z, const HTMPParams& p);
double stieltjes_derivative(double z, const HTMPParams& p);

enum class MomentMode { Recurrence, Quadrature };

// k-th moment. Recurrence mode reproduces the printed series coefficients
// (m1 = -(a-b+1), m2 = (a-b+1)(2a-b+2)); these live in the expansion
// variable of the transform and differ from the quadrature moments by a
// factor (-2 gamma/kappa)^k. Quadrature mode integrates x^k rho(x).
double htmp_moment(int k, const HTMPParams& p, MomentMode mode);

} // namespace htmp::laws

#endif
