#include "selfsim/exponents.hpp"

#include <cmath>
#include <stdexcept>

namespace selfsim {

ProblemParams::ProblemParams(int N, Rational p) : N_(N), p_(std::move(p)) {
    p_.canonicalize();
    if (N_ < 1) throw std::invalid_argument("dimension N must be >= 1");
    if (p_ <= 1) throw std::invalid_argument("exponent p must be > 1");
    p_value_ = p_.get_d();
}

ProblemParams::ProblemParams(int N, double p) : ProblemParams(N, Rational(p)) {}

bool ProblemParams::supercritical() const {
    if (N_ <= 2) return false;
    return p_ > rational(N_ + 2, N_ - 2);
}

CriticalExponents compute_critical_exponents(int N) {
    if (N < 1) throw std::invalid_argument("dimension N must be >= 1");
    CriticalExponents c;
    c.N = N;
    if (N > 2) c.p_S = Extended<Rational>::finite(rational(N + 2, N - 2));
    if (N > 10) {
        const Rational denom((N - 2) * (N - 10));
        QuadraticSurd jl(Rational(1) + Rational(4 * (N - 4)) / denom, Rational(8) / denom,
                         Rational(N - 1));
        c.p_JL = Extended<QuadraticSurd>::finite(jl);
        c.p_L = Extended<Rational>::finite(Rational(1) + rational(6, N - 10));
    }
    return c;
}

ExponentSet compute_exponents(const ProblemParams& params) {
    ExponentSet e;
    e.critical = compute_critical_exponents(params.N());
    const Rational pm1 = params.p() - 1;
    const double pm1_d = pm1.get_d();
    e.kappa_pm1 = Rational(1) / pm1;
    e.kappa = std::pow(pm1_d, -1.0 / pm1_d);
    const int N = params.N();
    if (params.p() * (N - 2) > N) {
        Rational lpm1 = Rational(2) * ((N - 2) * params.p() - N) / (pm1 * pm1);
        lpm1.canonicalize();
        e.L_pm1 = lpm1;
        e.L = std::pow(lpm1.get_d(), 1.0 / pm1_d);
    }
    return e;
}

int compare_with_pJL(const ProblemParams& params) {
    const auto crit = compute_critical_exponents(params.N());
    if (crit.p_JL.is_infinite()) return -1;
    return -compare(crit.p_JL.value(), params.p());
}

Regime classify_regime(const ProblemParams& params) {
    const auto crit = compute_critical_exponents(params.N());
    if (crit.p_S.is_infinite() || params.p() <= crit.p_S.value()) return Regime::AtMostSobolev;
    const int jl = compare_with_pJL(params);
    if (jl < 0) return Regime::SobolevToJL;
    if (jl == 0) return Regime::AtJL;
    const Rational& pl = crit.p_L.value();
    if (params.p() < pl) return Regime::JLToLepin;
    if (params.p() == pl) return Regime::AtLepin;
    return Regime::AboveLepin;
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::AtMostSobolev: return "p<=p_S";
        case Regime::SobolevToJL: return "p_S<p<p_JL";
        case Regime::AtJL: return "p=p_JL";
        case Regime::JLToLepin: return "p_JL<p<p_L";
        case Regime::AtLepin: return "p=p_L";
        case Regime::AboveLepin: return "p>p_L";
    }
    return "unknown";
}

PjResult compute_pj(int N, int j) {
    if (j < 2) throw std::invalid_argument("p_j is defined for j >= 2");
    if (N < 1) throw std::invalid_argument("dimension N must be >= 1");
    PjResult r;
    r.N = N;
    r.j = j;
    const long denom = static_cast<long>(N) * (j - 1) - 2L * j * j - 2L * j + 2;
    if (denom <= 0) return r;
    Rational v = Rational(1) + rational(4 * j - 2, denom);
    v.canonicalize();
    r.value = v;
    // beta = -2/(p-1) - 2j requires sqrt(disc) = N - 2 - 4/(p-1) - 4j >= 0.
    r.eigenvalue_zero = Rational(N - 2 - 4 * j) - Rational(4) / (v - 1) >= 0;
    const auto crit = compute_critical_exponents(N);
    if (crit.p_JL.is_finite()) r.above_pJL = compare(crit.p_JL.value(), v) < 0;
    return r;
}

}  // namespace selfsim
