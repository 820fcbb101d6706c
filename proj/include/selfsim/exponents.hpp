#pragma once

#include "selfsim/rational.hpp"

#include <optional>
#include <string>

namespace selfsim {

/// Dimension and nonlinearity exponent of u_t = Δu + u^p.
///
/// The exponent is kept as an exact rational; decimal CLI input such as
/// "3.95" is stored as 79/20, and a double argument is converted exactly.
class ProblemParams {
public:
    ProblemParams(int N, Rational p);
    ProblemParams(int N, double p);

    int N() const { return N_; }
    const Rational& p() const { return p_; }
    double p_value() const { return p_value_; }

    /// N > 2 and p > (N+2)/(N-2).
    bool supercritical() const;

private:
    int N_;
    Rational p_;
    double p_value_;
};

/// Sobolev, Joseph-Lundgren and Lepin exponents of a dimension.
struct CriticalExponents {
    int N = 0;
    Extended<Rational> p_S = Extended<Rational>::infinity();
    Extended<QuadraticSurd> p_JL = Extended<QuadraticSurd>::infinity();
    Extended<Rational> p_L = Extended<Rational>::infinity();
};

struct ExponentSet {
    CriticalExponents critical;
    /// kappa = (p-1)^(-1/(p-1)); kappa^(p-1) = 1/(p-1) exactly.
    double kappa = 0;
    Rational kappa_pm1;
    /// L^(p-1) = 2((N-2)p - N)/(p-1)^2; present iff p(N-2) > N.
    std::optional<Rational> L_pm1;
    std::optional<double> L;
};

CriticalExponents compute_critical_exponents(int N);
ExponentSet compute_exponents(const ProblemParams& params);

enum class Regime {
    AtMostSobolev,     // 1 < p <= p_S: kappa is the only positive solution
    SobolevToJL,       // p_S < p < p_JL
    AtJL,              // p = p_JL
    JLToLepin,         // p_JL < p < p_L
    AtLepin,
    AboveLepin,
};

Regime classify_regime(const ProblemParams& params);
std::string to_string(Regime r);

/// Exact sign of p - p_JL(N); +1 when p_JL is infinite is never returned
/// (infinite p_JL compares as greater than every p).
int compare_with_pJL(const ProblemParams& params);

/// The exponent p_j at which the j-th eigenvalue of the linearization at the
/// singular solution vanishes.
struct PjResult {
    int N = 0;
    int j = 0;
    /// Absent when the denominator N(j-1) - 2j^2 - 2j + 2 is nonpositive.
    std::optional<Rational> value;
    /// Exact comparison p_j > p_JL(N) (false when value is absent or p_JL = inf).
    bool above_pJL = false;
    /// lambda_j(p_j) = 0 holds with the principal Frobenius exponent beta.
    /// The closed form for p_j comes from squaring; for small N its value
    /// solves the equation for the other exponent instead.
    bool eigenvalue_zero = false;

    /// p_j lies above p_JL and lambda_j vanishes there.
    bool zero_eigenvalue_above_pJL() const { return above_pJL && eigenvalue_zero; }
};

PjResult compute_pj(int N, int j);

}  // namespace selfsim
