#pragma once

#include "selfsim/rational.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace selfsim {

/// Polynomial in B with exact rational coefficients, lowest degree first.
/// The zero polynomial has no coefficients.
class RationalPoly {
public:
    RationalPoly() = default;
    RationalPoly(Rational constant);
    explicit RationalPoly(std::vector<Rational> coeffs);

    /// The polynomial B.
    static RationalPoly variable();

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rational>& coefficients() const { return c_; }
    Rational coefficient(int k) const;

    Rational operator()(const Rational& B) const;
    double operator()(double B) const;

    /// p(B + m).
    RationalPoly shifted(const Rational& m) const;

    RationalPoly& operator+=(const RationalPoly& o);
    RationalPoly& operator-=(const RationalPoly& o);
    RationalPoly& operator*=(const RationalPoly& o);
    friend RationalPoly operator+(RationalPoly a, const RationalPoly& b) { return a += b; }
    friend RationalPoly operator-(RationalPoly a, const RationalPoly& b) { return a -= b; }
    friend RationalPoly operator*(RationalPoly a, const RationalPoly& b) { return a *= b; }
    friend bool operator==(const RationalPoly& a, const RationalPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const RationalPoly& a, const RationalPoly& b) { return !(a == b); }

    /// Every coefficient up to the degree is > 0.
    bool all_coefficients_positive() const;
    /// No coefficient is negative and the polynomial is not zero.
    bool all_coefficients_nonnegative() const;

    /// "c0 + c1*B + c2*B^2 ...".
    std::string to_string() const;

private:
    void trim();
    std::vector<Rational> c_;
};

/// T_{n1}^{n2}(B) = (B + n1)(B + n1 + 1)...(B + n2); 1 when n1 > n2.
RationalPoly T_product(int n1, int n2);
Rational T_product(int n1, int n2, const Rational& B);

/// C(n, k) for integers.
Rational binomial(int n, int k);

/// Generalized Laguerre polynomial L(j, alpha, x) = sum_i (-1)^i C(j+alpha, j-i) x^i / i!
/// with alpha a polynomial in B; coefficient i is a polynomial in B.
struct LagPoly {
    int j = 0;
    RationalPoly alpha;
    std::vector<RationalPoly> coeffs;  // in x, lowest degree first

    /// Coefficient-wise value at B.
    std::vector<Rational> at(const Rational& B) const;
    Rational operator()(const Rational& B, const Rational& x) const;
};

LagPoly laguerre(int j, const RationalPoly& alpha);

/// Raised when a rational function of B would be evaluated within
/// pole_guard of one of its poles.
class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline constexpr double pole_guard = 1e-9;

/// numerator(B) / T_{lo}^{hi}(B).
struct PolyOverT {
    RationalPoly numerator;
    int lo = 0;
    int hi = -1;

    /// Throws PoleError within pole_guard of a zero of the denominator.
    Rational operator()(const Rational& B) const;
    /// Same function with denominator T_{lo'}^{hi'}, lo' <= lo, hi' >= hi.
    PolyOverT widened(int new_lo, int new_hi) const;
    friend bool operator==(const PolyOverT& a, const PolyOverT& b);
};

/// S(j, k1, k2, B) = sum_i (-1)^i C(j, i) C(j+k1-i, k1)^2 / T_{j-k2+i}^{j+i}(B),
/// over the common denominator T_{j-k2}^{2j}(B). Needs 0 <= k1 <= k2.
PolyOverT S_symbolic(int j, int k1, int k2);

/// Direct evaluation of the defining sum. Throws PoleError within pole_guard
/// of any pole of the summands.
Rational S_sum(int j, int k1, int k2, const Rational& B);

/// (j+k2)!/k2! / T_{j-k2}^{2j}(B).
PolyOverT S_closed_form_k1_zero(int j, int k2);

/// One k1-reduction step:
///   (j+k1)^2/k1^2 S(j,k1-1,k2,B) + (2j+2k1-1) j/k1^2 S(j-1,k1-1,k2,B+2)
///   + j(j-1)/k1^2 S(j-2,k1-1,k2,B+4),
/// evaluated exactly. Needs k1 > 0.
Rational S_reduction_step(int j, int k1, int k2, const Rational& B);

/// Repeats the reduction until k1 = 0 or j <= 1. Keys (j~, k1~) carry the
/// coefficient of S(j~, k1~, k2, B + 2(j - j~)).
std::map<std::pair<int, int>, Rational> S_full_reduction(int j, int k1);

/// Closed form of S(jt, k1t, k2, B + 2(j - jt)) for a term left by the full
/// reduction (k1t = 0 or jt <= 1), as a function of B.
PolyOverT S_reduced_term(int j, int jt, int k1t, int k2);

/// T_0^(2j)(B) S(j, k, k, B) assembled from the full reduction and the
/// reduced-term closed forms; a polynomial in B.
RationalPoly S_scaled_by_reduction(int j, int k);

/// Q_j(B) = (1/Gamma(B)) int_0^inf x^(B-1) e^(-x) L(j, B+j, x)^3 dx by
/// cubing and integrating moments, Gamma(B+k)/Gamma(B) = T_0^(k-1)(B).
RationalPoly Q_by_moments(int j);

/// Q_j(B) = (1/j!) T_0^(2j)(B) sum_m S(j, j-m, j-m, B) / m!.
RationalPoly Q_by_S_assembly(int j);

/// Both routes; throws std::logic_error if they disagree.
RationalPoly Q_symbolic(int j);

struct QuadratureValue {
    double value = 0;
    double error_bound = 0;
    int nodes = 0;
};

/// Generalized Gauss-Laguerre evaluation of Q_j(B) at `digits` decimal digits.
/// Needs B > 0.
QuadratureValue Q_quadrature(int j, const Rational& B, unsigned digits = 50);

/// (1/Gamma(B)) int_0^inf x^(B+i-1) e^(-x) L(m,B+i-1,x) L(n,B+i-1,x) dx by moments.
RationalPoly ortho_moment(int m, int n, int i);
/// delta_mn T_0^(m+i-1)(B) / m!.
RationalPoly ortho_expected(int m, int n, int i);

/// L(j, B+j, x) and sum_m C(2j-i-m, j-m) L(m, B+i-1, x), coefficient-wise.
std::pair<LagPoly, std::vector<RationalPoly>> recurrence_sides(int j, int i);
bool recurrence_holds(int j, int i);

}  // namespace selfsim
