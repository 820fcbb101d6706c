#include "selfsim/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace selfsim {

namespace {

mpz_class pow10(unsigned long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto fail = [&]() -> Rational {
        throw std::invalid_argument("not a rational number: '" + s + "'");
    };
    if (s.empty()) return fail();

    if (auto slash = s.find('/'); slash != std::string::npos) {
        Rational num = parse_rational(s.substr(0, slash));
        Rational den = parse_rational(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
        Rational q = num / den;
        q.canonicalize();
        return q;
    }

    std::size_t pos = 0;
    bool negative = false;
    if (s[pos] == '+' || s[pos] == '-') {
        negative = s[pos] == '-';
        ++pos;
    }
    std::string digits;
    long frac_digits = 0;
    bool seen_point = false;
    for (; pos < s.size(); ++pos) {
        char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            if (seen_point) ++frac_digits;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (digits.empty()) return fail();
    long exponent = 0;
    if (pos < s.size()) {
        if (s[pos] != 'e' && s[pos] != 'E') return fail();
        std::string exp_text = s.substr(pos + 1);
        if (exp_text.empty()) return fail();
        std::size_t used = 0;
        try {
            exponent = std::stol(exp_text, &used);
        } catch (const std::exception&) {
            return fail();
        }
        if (used != exp_text.size()) return fail();
    }
    mpz_class mantissa(digits, 10);
    long shift = exponent - frac_digits;
    Rational q;
    if (shift >= 0) {
        q = Rational(mantissa * pow10(static_cast<unsigned long>(shift)));
    } else {
        q = Rational(mantissa, pow10(static_cast<unsigned long>(-shift)));
    }
    q.canonicalize();
    return negative ? Rational(-q) : q;
}

std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double to_double(const Rational& q) { return q.get_d(); }

std::optional<Rational> exact_sqrt(const Rational& q) {
    if (q < 0) return std::nullopt;
    const mpz_class& n = q.get_num();
    const mpz_class& d = q.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) {
        return std::nullopt;
    }
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    Rational r(rn, rd);
    r.canonicalize();
    return r;
}

QuadraticSurd::QuadraticSurd(Rational a) : a_(std::move(a)) { a_.canonicalize(); }

QuadraticSurd::QuadraticSurd(Rational a, Rational b, Rational d)
    : a_(std::move(a)), b_(std::move(b)), d_(std::move(d)) {
    a_.canonicalize();
    b_.canonicalize();
    d_.canonicalize();
    if (d_ < 0) throw std::domain_error("negative radicand in quadratic surd");
    normalize();
}

void QuadraticSurd::normalize() {
    if (b_ == 0 || d_ == 0) {
        b_ = 0;
        d_ = 0;
        return;
    }
    if (auto root = exact_sqrt(d_)) {
        a_ += b_ * *root;
        b_ = 0;
        d_ = 0;
    }
}

std::optional<Rational> QuadraticSurd::as_rational() const {
    if (is_rational()) return a_;
    return std::nullopt;
}

int QuadraticSurd::sign() const {
    const int sa = sgn(a_);
    const int sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    // Opposite signs: compare a^2 with b^2 d.
    Rational lhs = a_ * a_;
    Rational rhs = b_ * b_ * d_;
    if (lhs == rhs) return 0;
    return lhs > rhs ? sa : sb;
}

double QuadraticSurd::to_double() const {
    if (is_rational()) return a_.get_d();
    const double root = std::sqrt(d_.get_d());
    const double a = a_.get_d();
    const double bs = b_.get_d() * root;
    if ((a >= 0) == (bs >= 0)) return a + bs;
    // Opposite signs: use the conjugate to avoid cancellation.
    Rational num = a_ * a_ - b_ * b_ * d_;
    return num.get_d() / (a - bs);
}

double QuadraticSurd::rounding_bound() const {
    const double eps = std::numeric_limits<double>::epsilon();
    double scale = std::abs(a_.get_d()) + std::abs(b_.get_d()) * std::sqrt(d_.get_d());
    if (is_rational()) return eps * std::abs(a_.get_d());
    // Conjugate evaluation keeps the relative error at a few ulps of the
    // result; the absolute form below covers the same-sign branch.
    return 8 * eps * std::max(std::abs(to_double()), eps * scale);
}

QuadraticSurd QuadraticSurd::operator+(const Rational& q) const {
    QuadraticSurd r = *this;
    r.a_ += q;
    return r;
}

QuadraticSurd QuadraticSurd::operator-(const Rational& q) const {
    QuadraticSurd r = *this;
    r.a_ -= q;
    return r;
}

QuadraticSurd QuadraticSurd::operator*(const Rational& q) const {
    QuadraticSurd r = *this;
    r.a_ *= q;
    r.b_ *= q;
    r.normalize();
    return r;
}

QuadraticSurd QuadraticSurd::operator-(const QuadraticSurd& other) const {
    if (other.is_rational()) return *this - other.a_;
    if (is_rational()) {
        QuadraticSurd r = other * Rational(-1);
        r.a_ += a_;
        return r;
    }
    if (d_ != other.d_) {
        throw std::domain_error("surd subtraction with different radicands");
    }
    return QuadraticSurd(a_ - other.a_, b_ - other.b_, d_);
}

std::string QuadraticSurd::to_string() const {
    if (is_rational()) return selfsim::to_string(a_);
    std::ostringstream os;
    os << selfsim::to_string(a_) << " + (" << selfsim::to_string(b_) << ")*sqrt("
       << selfsim::to_string(d_) << ")";
    return os.str();
}

int compare(const QuadraticSurd& lhs, const Rational& rhs) { return (lhs - rhs).sign(); }

int compare(const QuadraticSurd& lhs, const QuadraticSurd& rhs) {
    if (lhs.is_rational() || rhs.is_rational() || lhs.radicand() == rhs.radicand()) {
        return (lhs - rhs).sign();
    }
    // a1 + b1 sqrt(d1) vs a2 + b2 sqrt(d2): fall back to a two-stage squaring
    // argument on x = b1 sqrt(d1) - b2 sqrt(d2) compared with a2 - a1.
    const Rational c = rhs.rational_part() - lhs.rational_part();
    const Rational& b1 = lhs.surd_coefficient();
    const Rational& d1 = lhs.radicand();
    const Rational& b2 = rhs.surd_coefficient();
    const Rational& d2 = rhs.radicand();
    // sign(x - c) where x = s1 - s2, s1 = b1 sqrt(d1), s2 = b2 sqrt(d2).
    // x - c = (s1 - c) - s2; both pieces are single surds.
    QuadraticSurd u(-c, b1, d1);  // s1 - c
    const int su = u.sign();
    const int s2 = sgn(b2);
    if (su == 0) return -s2;
    if (s2 == 0) return su;
    if (su != s2) return su;
    // Same sign: compare u^2 with s2^2 = b2^2 d2. u^2 = c^2 + b1^2 d1 - 2 c b1 sqrt(d1).
    QuadraticSurd u2(c * c + b1 * b1 * d1 - b2 * b2 * d2, Rational(-2) * c * b1, d1);
    const int sq = u2.sign();
    return su > 0 ? sq : -sq;
}

}  // namespace selfsim
