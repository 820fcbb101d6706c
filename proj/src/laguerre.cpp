#include "selfsim/laguerre.hpp"

#include "selfsim/gauss_laguerre.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace selfsim {

namespace {

Rational factorial(int n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Rational(f);
}

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

// Throws PoleError when B + n is within pole_guard of zero for some n in [lo, hi].
void check_poles(int lo, int hi, const Rational& B) {
    static const Rational guard = rational(1, 1000000000);
    for (int n = lo; n <= hi; ++n) {
        if (abs(B + n) < guard) {
            std::ostringstream os;
            os << "evaluation at B = " << to_string(B) << " is within " << pole_guard << " of the pole B = " << -n;
            throw PoleError(os.str());
        }
    }
}

}  // namespace

RationalPoly::RationalPoly(Rational constant) : c_{std::move(constant)} { trim(); }

RationalPoly::RationalPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
    for (auto& q : c_) q.canonicalize();
    trim();
}

RationalPoly RationalPoly::variable() { return RationalPoly(std::vector<Rational>{0, 1}); }

void RationalPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational RationalPoly::coefficient(int k) const {
    return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : Rational(0);
}

Rational RationalPoly::operator()(const Rational& B) const {
    Rational v = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * B + *it;
    v.canonicalize();
    return v;
}

double RationalPoly::operator()(double B) const {
    double v = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * B + it->get_d();
    return v;
}

RationalPoly RationalPoly::shifted(const Rational& m) const {
    const RationalPoly lin(std::vector<Rational>{m, 1});
    RationalPoly out;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        out *= lin;
        out += RationalPoly(*it);
    }
    return out;
}

RationalPoly& RationalPoly::operator+=(const RationalPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    for (auto& q : c_) q.canonicalize();
    trim();
    return *this;
}

RationalPoly& RationalPoly::operator-=(const RationalPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    for (auto& q : c_) q.canonicalize();
    trim();
    return *this;
}

RationalPoly& RationalPoly::operator*=(const RationalPoly& o) {
    if (c_.empty() || o.c_.empty()) {
        c_.clear();
        return *this;
    }
    std::vector<Rational> r(c_.size() + o.c_.size() - 1, Rational(0));
    for (std::size_t a = 0; a < c_.size(); ++a) {
        for (std::size_t b = 0; b < o.c_.size(); ++b) r[a + b] += c_[a] * o.c_[b];
    }
    for (auto& q : r) q.canonicalize();
    c_ = std::move(r);
    trim();
    return *this;
}

bool RationalPoly::all_coefficients_positive() const {
    return !c_.empty() && std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return q > 0; });
}

bool RationalPoly::all_coefficients_nonnegative() const {
    return !c_.empty() && std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return q >= 0; });
}

std::string RationalPoly::to_string() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < c_.size(); ++k) {
        if (c_[k] == 0) continue;
        if (!first) os << (c_[k] < 0 ? " - " : " + ");
        else if (c_[k] < 0) os << "-";
        os << selfsim::to_string(abs(Rational(c_[k])));
        if (k == 1) os << "*B";
        if (k > 1) os << "*B^" << k;
        first = false;
    }
    return os.str();
}

RationalPoly T_product(int n1, int n2) {
    RationalPoly out(Rational(1));
    for (int n = n1; n <= n2; ++n) out *= RationalPoly(std::vector<Rational>{n, 1});
    return out;
}

Rational T_product(int n1, int n2, const Rational& B) {
    Rational out = 1;
    for (int n = n1; n <= n2; ++n) out *= B + n;
    out.canonicalize();
    return out;
}

Rational binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rational(b);
}

std::vector<Rational> LagPoly::at(const Rational& B) const {
    std::vector<Rational> out;
    out.reserve(coeffs.size());
    for (const auto& c : coeffs) out.push_back(c(B));
    return out;
}

Rational LagPoly::operator()(const Rational& B, const Rational& x) const {
    const auto c = at(B);
    Rational v = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    v.canonicalize();
    return v;
}

LagPoly laguerre(int j, const RationalPoly& alpha) {
    require(j >= 0, "Laguerre degree must be >= 0");
    LagPoly L;
    L.j = j;
    L.alpha = alpha;
    for (int i = 0; i <= j; ++i) {
        // C(j + alpha, j - i) as a falling factorial over (j - i)!.
        RationalPoly c(Rational(1));
        for (int t = 0; t < j - i; ++t) c *= alpha + RationalPoly(Rational(j - t));
        Rational scale = Rational(i % 2 == 0 ? 1 : -1) / (factorial(j - i) * factorial(i));
        scale.canonicalize();
        L.coeffs.push_back(c * RationalPoly(scale));
    }
    return L;
}

Rational PolyOverT::operator()(const Rational& B) const {
    check_poles(lo, hi, B);
    Rational v = numerator(B) / T_product(lo, hi, B);
    v.canonicalize();
    return v;
}

PolyOverT PolyOverT::widened(int new_lo, int new_hi) const {
    PolyOverT out;
    out.lo = new_lo;
    out.hi = new_hi;
    if (lo > hi) {
        out.numerator = numerator * T_product(new_lo, new_hi);
        return out;
    }
    require(new_lo <= lo && new_hi >= hi, "widened range must contain the original");
    out.numerator = numerator * T_product(new_lo, lo - 1) * T_product(hi + 1, new_hi);
    return out;
}

bool operator==(const PolyOverT& a, const PolyOverT& b) {
    if (a.lo > a.hi && b.lo > b.hi) return a.numerator == b.numerator;
    int lo, hi;
    if (a.lo > a.hi) {
        lo = b.lo;
        hi = b.hi;
    } else if (b.lo > b.hi) {
        lo = a.lo;
        hi = a.hi;
    } else {
        lo = std::min(a.lo, b.lo);
        hi = std::max(a.hi, b.hi);
    }
    return a.widened(lo, hi).numerator == b.widened(lo, hi).numerator;
}

PolyOverT S_symbolic(int j, int k1, int k2) {
    require(j >= 0 && 0 <= k1 && k1 <= k2, "S needs j >= 0 and 0 <= k1 <= k2");
    PolyOverT out;
    out.lo = j - k2;
    out.hi = 2 * j;
    for (int i = 0; i <= j; ++i) {
        const Rational b = binomial(j + k1 - i, k1);
        Rational c = binomial(j, i) * b * b;
        if (i % 2 == 1) c = -c;
        // T_{j-k2}^{2j} / T_{j-k2+i}^{j+i}
        out.numerator += RationalPoly(c) * T_product(j - k2, j - k2 + i - 1) * T_product(j + i + 1, 2 * j);
    }
    return out;
}

Rational S_sum(int j, int k1, int k2, const Rational& B) {
    require(j >= 0 && 0 <= k1 && k1 <= k2, "S needs j >= 0 and 0 <= k1 <= k2");
    check_poles(j - k2, 2 * j, B);
    Rational s = 0;
    for (int i = 0; i <= j; ++i) {
        const Rational b = binomial(j + k1 - i, k1);
        Rational c = binomial(j, i) * b * b / T_product(j - k2 + i, j + i, B);
        s += i % 2 == 0 ? c : -c;
    }
    s.canonicalize();
    return s;
}

PolyOverT S_closed_form_k1_zero(int j, int k2) {
    require(j >= 0 && k2 >= 0, "closed form needs j, k2 >= 0");
    Rational c = factorial(j + k2) / factorial(k2);
    c.canonicalize();
    return PolyOverT{RationalPoly(c), j - k2, 2 * j};
}

Rational S_reduction_step(int j, int k1, int k2, const Rational& B) {
    require(j >= 0 && 0 < k1 && k1 <= k2, "reduction step needs j >= 0 and 0 < k1 <= k2");
    const Rational k1sq = k1 * k1;
    Rational v = Rational((j + k1) * (j + k1)) / k1sq * S_sum(j, k1 - 1, k2, B);
    if (j >= 1) v += Rational((2 * j + 2 * k1 - 1) * j) / k1sq * S_sum(j - 1, k1 - 1, k2, B + 2);
    if (j >= 2) v += Rational(j * (j - 1)) / k1sq * S_sum(j - 2, k1 - 1, k2, B + 4);
    v.canonicalize();
    return v;
}

std::map<std::pair<int, int>, Rational> S_full_reduction(int j, int k1) {
    require(j >= 0 && k1 >= 0, "reduction needs j, k1 >= 0");
    std::map<std::pair<int, int>, Rational> terms{{{j, k1}, Rational(1)}};
    for (;;) {
        auto it = std::find_if(terms.begin(), terms.end(),
                               [](const auto& t) { return t.first.second > 0 && t.first.first >= 2; });
        if (it == terms.end()) break;
        const auto [jj, kk] = it->first;
        const Rational c = it->second;
        terms.erase(it);
        const Rational k1sq = kk * kk;
        auto add = [&](int jt, const Rational& w) {
            if (w == 0) return;
            Rational& slot = terms[{jt, kk - 1}];
            slot += c * w;
            slot.canonicalize();
        };
        add(jj, Rational((jj + kk) * (jj + kk)) / k1sq);
        add(jj - 1, Rational((2 * jj + 2 * kk - 1) * jj) / k1sq);
        add(jj - 2, Rational(jj * (jj - 1)) / k1sq);
    }
    return terms;
}

PolyOverT S_reduced_term(int j, int jt, int k1t, int k2) {
    require(0 <= jt && jt <= j && 0 <= k1t && k1t <= k2, "reduced term needs 0 <= jt <= j, 0 <= k1t <= k2");
    if (k1t == 0) {
        Rational c = factorial(jt + k2) / factorial(k2);
        c.canonicalize();
        return PolyOverT{RationalPoly(c), 2 * j - jt - k2, 2 * j};
    }
    if (jt == 0) return PolyOverT{RationalPoly(Rational(1)), 2 * j - k2, 2 * j};
    require(jt == 1, "reduced term needs k1t = 0 or jt <= 1");
    const Rational a = k1t * k1t + 2 * k1t;
    return PolyOverT{RationalPoly(std::vector<Rational>{a * (2 * j) + k2 + 1, a}), 2 * j - 1 - k2, 2 * j};
}

RationalPoly S_scaled_by_reduction(int j, int k) {
    RationalPoly out;
    for (const auto& [key, c] : S_full_reduction(j, k)) {
        const PolyOverT term = S_reduced_term(j, key.first, key.second, k);
        out += RationalPoly(c) * term.numerator * T_product(0, term.lo - 1);
    }
    return out;
}

RationalPoly Q_by_moments(int j) {
    require(j >= 0, "Q_j needs j >= 0");
    const LagPoly L = laguerre(j, RationalPoly::variable() + RationalPoly(Rational(j)));
    std::vector<RationalPoly> sq(2 * j + 1), cube(3 * j + 1);
    for (int a = 0; a <= j; ++a)
        for (int b = 0; b <= j; ++b) sq[a + b] += L.coeffs[a] * L.coeffs[b];
    for (int a = 0; a <= 2 * j; ++a)
        for (int b = 0; b <= j; ++b) cube[a + b] += sq[a] * L.coeffs[b];
    RationalPoly Q;
    for (int k = 0; k <= 3 * j; ++k) Q += cube[k] * T_product(0, k - 1);
    return Q;
}

RationalPoly Q_by_S_assembly(int j) {
    require(j >= 0, "Q_j needs j >= 0");
    RationalPoly sum;
    for (int m = 0; m <= j; ++m) {
        const int k = j - m;
        // T_0^{2j} / T_{j-k}^{2j} = T_0^{j-k-1}
        const PolyOverT S = S_symbolic(j, k, k);
        sum += S.numerator * T_product(0, j - k - 1) * RationalPoly(1 / factorial(m));
    }
    Rational inv = 1 / factorial(j);
    return sum * RationalPoly(inv);
}

RationalPoly Q_symbolic(int j) {
    const RationalPoly a = Q_by_moments(j);
    const RationalPoly b = Q_by_S_assembly(j);
    if (a != b) {
        throw std::logic_error("Q_" + std::to_string(j) + " disagrees between routes: " + a.to_string() + " vs " +
                               b.to_string());
    }
    return a;
}

QuadratureValue Q_quadrature(int j, const Rational& B, unsigned digits) {
    using boost::multiprecision::mpfr_float;
    require(j >= 0, "Q_j needs j >= 0");
    require(B > 0, "Q_j quadrature needs B > 0");
    require(digits >= 20, "Q_j quadrature needs at least 20 digits");
    const unsigned saved = mpfr_float::default_precision();
    mpfr_float::default_precision(digits);
    struct Restore {
        unsigned p;
        ~Restore() { mpfr_float::default_precision(p); }
    } restore{saved};

    auto to_mp = [](const Rational& q) {
        mpfr_float x;
        mpfr_set_q(x.backend().data(), q.get_mpq_t(), MPFR_RNDN);
        return x;
    };
    const LagPoly L = laguerre(j, RationalPoly::variable() + RationalPoly(Rational(j)));
    std::vector<mpfr_float> c;
    for (const auto& q : L.at(B)) c.push_back(to_mp(q));
    const mpfr_float a = to_mp(B - 1);
    const mpfr_float tol = pow(mpfr_float(10), -static_cast<int>(digits) + 5);

    auto evaluate = [&](int n, mpfr_float& magnitude) {
        const auto rule = gauss_laguerre<mpfr_float>(n, a, tol);
        mpfr_float sum = 0;
        magnitude = 0;
        for (int k = 0; k < n; ++k) {
            mpfr_float v = 0;
            for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * rule.x[k] + *it;
            const mpfr_float term = rule.w[k] * v * v * v;
            sum += term;
            magnitude += abs(term);
        }
        return sum;
    };
    // The integrand is a polynomial of degree 3j, integrated exactly by
    // ceil((3j+1)/2) nodes; a second rule with one more node bounds the error.
    const int n = (3 * j + 2) / 2;
    mpfr_float mag, mag2;
    const mpfr_float q1 = evaluate(n, mag);
    const mpfr_float q2 = evaluate(n + 1, mag2);
    QuadratureValue out;
    out.value = static_cast<double>(q1);
    out.error_bound = static_cast<double>(abs(q1 - q2) + 10 * tol * max(mag, mag2));
    out.nodes = n;
    return out;
}

RationalPoly ortho_moment(int m, int n, int i) {
    require(m >= 0 && n >= 0 && i >= 0, "orthogonality check needs m, n, i >= 0");
    const RationalPoly a = RationalPoly::variable() + RationalPoly(Rational(i - 1));
    const LagPoly Lm = laguerre(m, a);
    const LagPoly Ln = laguerre(n, a);
    RationalPoly out;
    for (int s = 0; s <= m; ++s)
        for (int t = 0; t <= n; ++t) out += Lm.coeffs[s] * Ln.coeffs[t] * T_product(0, i + s + t - 1);
    return out;
}

RationalPoly ortho_expected(int m, int n, int i) {
    if (m != n) return RationalPoly();
    return T_product(0, m + i - 1) * RationalPoly(1 / factorial(m));
}

std::pair<LagPoly, std::vector<RationalPoly>> recurrence_sides(int j, int i) {
    require(0 <= i && i <= j, "recurrence needs 0 <= i <= j");
    const RationalPoly B = RationalPoly::variable();
    LagPoly lhs = laguerre(j, B + RationalPoly(Rational(j)));
    std::vector<RationalPoly> rhs(j + 1);
    for (int m = 0; m <= j; ++m) {
        const LagPoly Lm = laguerre(m, B + RationalPoly(Rational(i - 1)));
        const RationalPoly w(binomial(2 * j - i - m, j - m));
        for (int k = 0; k <= m; ++k) rhs[k] += w * Lm.coeffs[k];
    }
    return {std::move(lhs), std::move(rhs)};
}

bool recurrence_holds(int j, int i) {
    const auto [lhs, rhs] = recurrence_sides(j, i);
    return lhs.coeffs == rhs;
}

}  // namespace selfsim
