#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace selfsim {

using Rational = mpq_class;

/// Canonical n/d. mpq_class(n, d) alone does not reduce the fraction.
inline Rational rational(long n, long d = 1) {
    Rational q(n, d);
    q.canonicalize();
    return q;
}

/// Parses "7", "-3/4", "3.95", "1e-3" or "2.5E2" into an exact rational.
/// Decimal input is read digit-by-digit, so "3.95" becomes 79/20 rather than
/// the nearest binary double.
Rational parse_rational(std::string_view text);

/// "num/den", or just "num" for integers.
std::string to_string(const Rational& q);

double to_double(const Rational& q);

/// Exact square root of a nonnegative rational when it is a perfect square.
std::optional<Rational> exact_sqrt(const Rational& q);

/// A value of the form a + b*sqrt(d) with rational a, b and d >= 0.
///
/// Perfect-square radicands are folded into the rational part on construction,
/// so is_rational() is exact. Ordering and sign are decided without rounding.
class QuadraticSurd {
public:
    QuadraticSurd() = default;
    explicit QuadraticSurd(Rational a);
    QuadraticSurd(Rational a, Rational b, Rational d);

    const Rational& rational_part() const { return a_; }
    const Rational& surd_coefficient() const { return b_; }
    const Rational& radicand() const { return d_; }

    bool is_rational() const { return b_ == 0; }
    std::optional<Rational> as_rational() const;

    /// -1, 0 or +1, exactly.
    int sign() const;

    double to_double() const;
    /// Upper bound on |to_double() - exact value|.
    double rounding_bound() const;

    QuadraticSurd operator+(const Rational& q) const;
    QuadraticSurd operator-(const Rational& q) const;
    QuadraticSurd operator*(const Rational& q) const;
    /// Only defined for a common radicand (or when either side is rational).
    QuadraticSurd operator-(const QuadraticSurd& other) const;

    std::string to_string() const;

private:
    void normalize();

    Rational a_{0};
    Rational b_{0};
    Rational d_{0};
};

int compare(const QuadraticSurd& lhs, const Rational& rhs);
int compare(const QuadraticSurd& lhs, const QuadraticSurd& rhs);

/// A finite value or +infinity, used for critical exponents that do not
/// exist in low dimensions.
template <typename T>
class Extended {
public:
    static Extended infinity() { return Extended{}; }
    static Extended finite(T v) { return Extended{std::move(v)}; }

    bool is_infinite() const { return !value_.has_value(); }
    bool is_finite() const { return value_.has_value(); }
    const T& value() const { return value_.value(); }

private:
    Extended() = default;
    explicit Extended(T v) : value_(std::move(v)) {}
    std::optional<T> value_;
};

}  // namespace selfsim
