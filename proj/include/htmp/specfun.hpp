#ifndef HTMP_SPECFUN_HPP
#define HTMP_SPECFUN_HPP

#include <complex>

#include "htmp/errors.hpp"

namespace htmp::specfun {

// Tolerances for series evaluation.
struct Accuracy {
    double rel_tol = 1e-12;     // in (0, 1e-6]
    int max_terms = 512;        // >= 64

    void validate() const {
        if (!(rel_tol > 0.0 && rel_tol <= 1e-6))
            throw contract_error("Accuracy.rel_tol must be in (0, 1e-6]");
        if (max_terms < 64)
            throw contract_error("Accuracy.max_terms must be >= 64");
    }
};

// ln Gamma(x) for x > 0.
double log_gamma(double x);

// Digamma psi(x) and trigamma psi'(x) for x > 0.
double digamma(double x);
double trigamma(double x);

// ln |Gamma(x)| and the sign of Gamma(x) for any non-pole real x.
double log_gamma_signed(double x, int& sign);

// Kummer confluent hypergeometric 1F1(a, b, z).
double kummer_1f1(double a, double b, double z, const Accuracy& acc = {});

// Value of U(a,b,z), kept as mantissa * exp(log_scale) so that huge and
// tiny magnitudes survive. Negative-argument values are complex.
struct UValue {
    double re = 0.0;
    double im = 0.0;
    double log_scale = 0.0;

    std::complex<double> value() const;
    double real() const;
    double modulus() const;
    double log_abs() const;     // ln |U|
    double log_abs_sq() const;  // ln |U|^2
};

// Tricomi confluent hypergeometric U(a,b,z) for real z of either sign.
// For z < 0 the continuation from the upper half plane is used and the
// result is complex; only the modulus is convention independent.
// b within 1e-8 of an integer is handled by evaluating at b +/- 1e-6 and
// averaging.
UValue tricomi_u(double a, double b, double z, const Accuracy& acc = {});

// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double a, double b, double x);

namespace detail {

// Mantissa/exponent pair m * exp(lg) used by series accumulators.
struct ScaledReal {
    double m = 0.0;
    double lg = 0.0;

    double log_abs() const;
    double to_double() const;
};

// 1F1(a,b,z) with result in scaled form and a cancellation estimate
// (max |term| / |sum|, >= 1).
ScaledReal kummer_series_scaled(double a, double b, double z,
                                const Accuracy& acc, double& cancellation);

// U(a,b,z) by the large-|z| asymptotic series; returns false when the
// series cannot reach acc.rel_tol before diverging. For z < 0 pass the
// negative value; the phase is handled internally.
bool tricomi_asymptotic(double a, double b, double z, const Accuracy& acc,
                        UValue& out);

// Two-term connection formula, no integer-b handling. est_loss reports
// the cancellation factor between the two terms.
UValue tricomi_connection(double a, double b, double z, const Accuracy& acc,
                          double& est_loss);

} // namespace detail

} // namespace htmp::specfun

#endif
