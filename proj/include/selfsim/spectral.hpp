#pragma once

#include "selfsim/exponents.hpp"
#include "selfsim/ode.hpp"

#include <optional>
#include <string>
#include <vector>

namespace selfsim {

/// Linearization at the singular solution,
///   psi'' + ((N-1)/r - r/2) psi' + (V/r^2 - 1/(p-1)) psi = -lambda psi,
/// with V = p L^(p-1).
struct SpectrumInfo {
    int N = 0;
    Rational p;
    /// V = p L^(p-1).
    Rational V;
    /// (N-2)^2 - 4V.
    Rational discriminant;
    /// Frobenius exponents at r = 0, beta_minus < beta < 0.
    QuadraticSurd beta;
    QuadraticSurd beta_minus;
    /// lambda_j = beta/2 + 1/(p-1) + j, exactly and rounded.
    std::vector<QuadraticSurd> lambda;
    std::vector<double> lambda_value;
    /// Index j with lambda_j = 0 exactly.
    std::optional<int> zero_eig;
};

/// Throws std::domain_error for p <= p_JL, where beta is complex or double.
SpectrumInfo compute_spectrum(const ProblemParams& params, int j_max);

struct KummerValue {
    double value = 0;
    /// Bound on truncation plus accumulated rounding.
    double error_bound = 0;
    int terms = 0;
};

/// M(a, b, z) = sum (a)_k / (b)_k z^k / k!. Terminating for a = -j; otherwise
/// summed until the tail bound is below `tol` relative. Throws
/// std::domain_error when b is a nonpositive integer.
KummerValue kummer_M(double a, double b, double z, double tol = 1e-16);

/// Coefficients of the polynomial M(-j, b, z) in z, exactly.
std::vector<Rational> kummer_polynomial(int j, const Rational& b);

/// M(-j, b, z) in exact arithmetic.
Rational kummer_M_exact(int j, const Rational& b, const Rational& z);

/// psi_j(r) = r^beta M(-j, beta + N/2, r^2/4).
class EigenFn {
public:
    EigenFn(const SpectrumInfo& spec, int j);

    int j() const { return j_; }
    double beta() const { return beta_; }
    double b() const { return b_; }
    double lambda() const { return lambda_; }

    double operator()(double r) const;
    double derivative(double r) const;
    double second_derivative(double r) const;

    /// Residual of the eigen-equation at r divided by the sum of the
    /// magnitudes of its terms.
    double relative_residual(double r) const;

    /// Sign changes of psi_j on (0, r_max) on a grid of `samples` points.
    int count_zeros(double r_max, int samples = 20000) const;

    /// Log-log slope of |psi_j| fitted over [r_lo, r_hi].
    double loglog_slope(double r_lo, double r_hi, int samples = 64) const;

    /// -2/(p-1) + 2 lambda_j, the large-r exponent.
    double large_r_exponent() const { return -pm1_inv2_ + 2 * lambda_; }

private:
    // h(z), h'(z), h''(z) for the Kummer polynomial.
    double h(double z, int order) const;

    int N_;
    int j_;
    double beta_;
    double b_;
    double lambda_;
    double V_;
    double pm1_inv_;
    double pm1_inv2_;
    std::vector<double> coeffs_;
};

/// Solutions psi_1 ~ r^beta and psi_2 ~ r^beta_minus of the linearization
/// at lambda = 0, integrated from a series start at r_start.
struct ZeroModeTest {
    Trajectory<4> pair;  // (psi_1, psi_1', psi_2, psi_2')
    double r_start = 0;
    /// Window [r_fit/2, r_fit] of the two-mode fit of psi_1.
    double r_fit = 0;
    /// psi_1 ~ r^(-2/(p-1)) (A + a1 r^-2 + a2 r^-4 + a3 r^-6) + e^(r^2/4) r^(2/(p-1)-N) (B + b1 r^-2).
    double power_coefficient = 0;
    double growth_coefficient = 0;
    /// |growing part| / |decaying part| at r_fit.
    double growth_share = 0;
    /// Same fit on [r_fit/4, r_fit/2], as a stability check.
    double growth_share_half = 0;
    /// Log-log slope of |psi_1| over [r_fit/2, r_fit].
    double loglog_slope = 0;
    enum class Verdict { DecaysLikeSingular, Grows, Inconclusive } verdict = Verdict::Inconclusive;
    /// max over the samples of |omega W - omega W(r_start)| / |omega W(r_start)|.
    double wronskian_drift = 0;
};

std::string to_string(ZeroModeTest::Verdict v);

ZeroModeTest psi1_psi2_lambda0(const ProblemParams& params, double r_fit = 12, double r_start = 1e-3);

/// psi_1(r) = r^beta M(beta/2 + 1/(p-1), beta + N/2, r^2/4) from the series.
double psi1_closed_form(const SpectrumInfo& spec, double r);
double psi1_closed_form_derivative(const SpectrumInfo& spec, double r);

/// N - 1 + 3 beta - 2(p-2)/(p-1): the exponent of the s -> 0 envelope of the
/// integrand in the limit of F''. The integral diverges iff it is <= -1.
struct EnvelopeClass {
    QuadraticSurd exponent;
    bool divergent = false;
};

EnvelopeClass classify_envelope(const ProblemParams& params);

struct FppLimit {
    EnvelopeClass envelope;
    /// Finite limit when the envelope is integrable.
    std::optional<double> value;
    double error = 0;
};

/// Limit of F''(zeta) as zeta -> zeta_0, or the divergence flag.
FppLimit f_double_prime_limit(const ProblemParams& params, double r0);

}  // namespace selfsim
