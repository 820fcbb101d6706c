#include "selfsim/spectral.hpp"

#include "selfsim/least_squares.hpp"
#include "selfsim/profile.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <array>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace selfsim {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool nonpositive_integer(double b) { return b <= 0 && b == std::floor(b); }

}  // namespace

SpectrumInfo compute_spectrum(const ProblemParams& params, int j_max) {
    if (j_max < 0) throw std::invalid_argument("j_max must be >= 0");
    const int N = params.N();
    const Rational& p = params.p();
    const Rational pm1 = p - 1;
    SpectrumInfo s;
    s.N = N;
    s.p = p;
    s.V = Rational(2) * p * ((N - 2) * p - N) / (pm1 * pm1);
    s.V.canonicalize();
    s.discriminant = Rational((N - 2) * (N - 2)) - 4 * s.V;
    s.discriminant.canonicalize();
    if (compare_with_pJL(params) <= 0) {
        std::ostringstream os;
        os << "spectrum needs p > p_JL(N): discriminant (N-2)^2 - 4pL^(p-1) = " << to_string(s.discriminant)
           << (s.discriminant < 0 ? " < 0, Frobenius exponents are complex" : ", Frobenius exponents coincide");
        throw std::domain_error(os.str());
    }
    const Rational half_shift = rational(-(N - 2), 2);
    s.beta = QuadraticSurd(half_shift, rational(1, 2), s.discriminant);
    s.beta_minus = QuadraticSurd(half_shift, rational(-1, 2), s.discriminant);
    const Rational inv_pm1 = Rational(1) / pm1;
    for (int j = 0; j <= j_max; ++j) {
        QuadraticSurd lj = s.beta * rational(1, 2) + (inv_pm1 + j);
        s.lambda_value.push_back(lj.to_double());
        if (lj.sign() == 0 && !s.zero_eig) s.zero_eig = j;
        s.lambda.push_back(std::move(lj));
    }
    return s;
}

KummerValue kummer_M(double a, double b, double z, double tol) {
    if (nonpositive_integer(b)) throw std::domain_error("Kummer function pole: b is a nonpositive integer");
    KummerValue out;
    double term = 1;
    double sum = 1;
    double abs_sum = 1;
    if (nonpositive_integer(a)) {
        const int j = static_cast<int>(-a);
        for (int k = 0; k < j; ++k) {
            term *= (a + k) / (b + k) * z / (k + 1);
            sum += term;
            abs_sum += std::abs(term);
        }
        out.value = sum;
        out.terms = j + 1;
        out.error_bound = 4 * kEps * (j + 1) * abs_sum;
        return out;
    }
    const double aa = std::abs(a), ab = std::abs(b);
    for (int k = 0; k < 100000; ++k) {
        term *= (a + k) / (b + k) * z / (k + 1);
        sum += term;
        abs_sum += std::abs(term);
        const double n = k + 1;  // index of the last added term
        if (n > ab + 1) {
            // Every later ratio is at most (n + |a|)/(n - |b|) * |z| / (n + 1).
            const double rho = (n + aa) / (n - ab) * std::abs(z) / (n + 1);
            if (rho < 0.5) {
                const double tail = std::abs(term) * rho / (1 - rho);
                if (tail <= tol * std::abs(sum)) {
                    out.value = sum;
                    out.terms = k + 2;
                    out.error_bound = tail + 4 * kEps * (k + 2) * abs_sum;
                    return out;
                }
            }
        }
    }
    throw std::runtime_error("Kummer series did not converge");
}

std::vector<Rational> kummer_polynomial(int j, const Rational& b) {
    if (j < 0) throw std::invalid_argument("Kummer polynomial needs j >= 0");
    if (b <= 0 && b.get_den() == 1) throw std::domain_error("Kummer function pole: b is a nonpositive integer");
    std::vector<Rational> c{Rational(1)};
    for (int k = 0; k < j; ++k) {
        Rational next = c.back() * Rational(k - j) / ((b + k) * (k + 1));
        next.canonicalize();
        c.push_back(next);
    }
    return c;
}

Rational kummer_M_exact(int j, const Rational& b, const Rational& z) {
    const auto c = kummer_polynomial(j, b);
    Rational v = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
    v.canonicalize();
    return v;
}

EigenFn::EigenFn(const SpectrumInfo& spec, int j) : N_(spec.N), j_(j) {
    if (j < 0 || j >= static_cast<int>(spec.lambda.size())) {
        throw std::out_of_range("eigenfunction index outside the computed spectrum");
    }
    beta_ = spec.beta.to_double();
    b_ = beta_ + 0.5 * N_;
    lambda_ = spec.lambda_value[j];
    V_ = spec.V.get_d();
    pm1_inv_ = 1 / Rational(spec.p - 1).get_d();
    pm1_inv2_ = 2 * pm1_inv_;
    coeffs_.push_back(1);
    for (int k = 0; k < j; ++k) coeffs_.push_back(coeffs_.back() * (k - j) / ((b_ + k) * (k + 1)));
}

double EigenFn::h(double z, int order) const {
    double v = 0;
    for (int k = static_cast<int>(coeffs_.size()) - 1; k >= order; --k) {
        double c = coeffs_[k];
        for (int m = 0; m < order; ++m) c *= k - m;
        v = v * z + c;
    }
    return v;
}

double EigenFn::operator()(double r) const { return std::pow(r, beta_) * h(0.25 * r * r, 0); }

double EigenFn::derivative(double r) const {
    const double z = 0.25 * r * r;
    return std::pow(r, beta_ - 1) * (beta_ * h(z, 0) + 2 * z * h(z, 1));
}

double EigenFn::second_derivative(double r) const {
    const double z = 0.25 * r * r;
    return std::pow(r, beta_ - 2) *
           (beta_ * (beta_ - 1) * h(z, 0) + (2 * beta_ + 1) * 2 * z * h(z, 1) + 4 * z * z * h(z, 2));
}

double EigenFn::relative_residual(double r) const {
    const double psi = (*this)(r);
    const double d1 = derivative(r);
    const double d2 = second_derivative(r);
    const double t[] = {d2, (N_ - 1) / r * d1, -0.5 * r * d1, V_ / (r * r) * psi, (lambda_ - pm1_inv_) * psi};
    double sum = 0, mag = 0;
    for (double x : t) {
        sum += x;
        mag += std::abs(x);
    }
    return std::abs(sum) / mag;
}

int EigenFn::count_zeros(double r_max, int samples) const {
    int count = 0;
    double prev = h(0, 0);
    for (int i = 1; i <= samples; ++i) {
        const double r = r_max * i / samples;
        const double v = h(0.25 * r * r, 0);
        if ((v > 0) != (prev > 0) && v != 0) ++count;
        if (v != 0) prev = v;
    }
    return count;
}

double EigenFn::loglog_slope(double r_lo, double r_hi, int samples) const {
    std::vector<double> x, y;
    for (int i = 0; i < samples; ++i) {
        const double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / (samples - 1));
        x.push_back(std::log(r));
        y.push_back(std::log(std::abs((*this)(r))));
    }
    return fit_line(x, y).slope;
}

std::string to_string(ZeroModeTest::Verdict v) {
    switch (v) {
        case ZeroModeTest::Verdict::DecaysLikeSingular: return "decays-like-singular";
        case ZeroModeTest::Verdict::Grows: return "grows";
        case ZeroModeTest::Verdict::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

namespace {

struct Frobenius {
    double a;
    double b;
    double beta;
};

Frobenius frobenius(const SpectrumInfo& spec, const QuadraticSurd& exponent) {
    const double beta = exponent.to_double();
    return {0.5 * beta + 1 / Rational(spec.p - 1).get_d(), beta + 0.5 * spec.N, beta};
}

double kummer_value(const Frobenius& f, double r) {
    return std::pow(r, f.beta) * kummer_M(f.a, f.b, 0.25 * r * r).value;
}

double kummer_derivative(const Frobenius& f, double r) {
    const double z = 0.25 * r * r;
    const double M = kummer_M(f.a, f.b, z).value;
    const double Mp = f.a / f.b * kummer_M(f.a + 1, f.b + 1, z).value;
    return std::pow(r, f.beta - 1) * (f.beta * M + 2 * z * Mp);
}

// Fits psi ~ r^-m (A + a1 r^-2 + a2 r^-4 + a3 r^-6) + e^(r^2/4) r^(m-N) (B + b1 r^-2)
// on [lo, hi]; returns (A, B, |growing| / |decaying| at hi).
std::tuple<double, double, double> two_mode_fit(const Trajectory<4>& traj, double m, int N, double lo, double hi) {
    const int n = 96;
    auto basis = [&](double r) {
        const double f = std::pow(r, -m);
        const double g = std::exp(0.25 * r * r) * std::pow(r, m - N);
        const double r2 = 1 / (r * r);
        return std::array<double, 6>{f, f * r2, f * r2 * r2, f * r2 * r2 * r2, g, g * r2};
    };
    std::vector<std::vector<double>> columns(6);
    std::vector<double> y;
    for (int i = 0; i < n; ++i) {
        const double r = lo + (hi - lo) * i / (n - 1);
        const auto b = basis(r);
        for (int k = 0; k < 6; ++k) columns[k].push_back(b[k]);
        y.push_back(traj.at(r)[0]);
    }
    const auto sol = least_squares(columns, y);
    const auto b = basis(hi);
    double decaying = 0;
    for (int k = 0; k < 4; ++k) decaying += sol[k] * b[k];
    const double growing = sol[4] * b[4] + sol[5] * b[5];
    return {sol[0], sol[4], std::abs(growing) / std::abs(decaying)};
}

}  // namespace

ZeroModeTest psi1_psi2_lambda0(const ProblemParams& params, double r_fit, double r_start) {
    const auto spec = compute_spectrum(params, 0);
    if (!(r_start > 0 && r_start < 0.25 * r_fit)) throw std::invalid_argument("need 0 < r_start < r_fit/4");
    const ProfileModel model(params);
    const Frobenius f1 = frobenius(spec, spec.beta);
    const Frobenius f2 = frobenius(spec, spec.beta_minus);
    const double V = spec.V.get_d();
    const double inv_pm1 = 1 / model.pm1();

    ZeroModeTest out;
    out.r_start = r_start;
    out.r_fit = r_fit;
    const State<4> y0{kummer_value(f1, r_start), kummer_derivative(f1, r_start), kummer_value(f2, r_start),
                      kummer_derivative(f2, r_start)};
    IntegratorConfig ic;
    ic.rel_tol = 1e-13;
    ic.abs_tol = 1e-300;
    ic.r_start = r_start;
    ic.r_end = r_fit;
    ic.component_cap = std::numeric_limits<double>::infinity();
    auto rhs = [&](double r, const State<4>& y, State<4>& dy) {
        const double q = V / (r * r) - inv_pm1;
        dy[0] = y[1];
        dy[1] = model.linear_rhs(r, y[0], y[1], q);
        dy[2] = y[3];
        dy[3] = model.linear_rhs(r, y[2], y[3], q);
    };
    out.pair = integrate<4>(rhs, ic, y0);
    if (!out.pair.ok()) {
        throw std::runtime_error("integration of the lambda = 0 pair stopped: " + to_string(out.pair.termination));
    }

    const int N = params.N();
    auto omega_w = [&](double r) {
        const auto y = out.pair.at(r);
        return std::exp(log_weight(N, r)) * wronskian(y[0], y[1], y[2], y[3]);
    };
    const double w0 = omega_w(r_start);
    for (int i = 1; i <= 200; ++i) {
        const double r = r_start + (r_fit - r_start) * i / 200;
        out.wronskian_drift = std::max(out.wronskian_drift, std::abs(omega_w(r) - w0) / std::abs(w0));
    }

    const double m = model.decay_exponent();
    const auto [A, B, share] = two_mode_fit(out.pair, m, N, 0.5 * r_fit, r_fit);
    out.power_coefficient = A;
    out.growth_coefficient = B;
    out.growth_share = share;
    out.growth_share_half = std::get<2>(two_mode_fit(out.pair, m, N, 0.25 * r_fit, 0.5 * r_fit));
    {
        std::vector<double> x, y;
        for (int i = 0; i < 64; ++i) {
            const double r = 0.5 * r_fit * std::pow(2.0, i / 63.0);
            x.push_back(std::log(r));
            y.push_back(std::log(std::abs(out.pair.at(r)[0])));
        }
        out.loglog_slope = fit_line(x, y).slope;
    }
    if (out.growth_share < 1e-4) {
        out.verdict = ZeroModeTest::Verdict::DecaysLikeSingular;
    } else if (out.growth_share > 1e-2) {
        out.verdict = ZeroModeTest::Verdict::Grows;
    }
    return out;
}

double psi1_closed_form(const SpectrumInfo& spec, double r) { return kummer_value(frobenius(spec, spec.beta), r); }

double psi1_closed_form_derivative(const SpectrumInfo& spec, double r) {
    return kummer_derivative(frobenius(spec, spec.beta), r);
}

EnvelopeClass classify_envelope(const ProblemParams& params) {
    const auto spec = compute_spectrum(params, 0);
    const Rational& p = params.p();
    Rational shift = Rational(params.N() - 1) - 2 * (p - 2) / (p - 1);
    shift.canonicalize();
    EnvelopeClass e;
    e.exponent = spec.beta * Rational(3) + shift;
    e.divergent = compare(e.exponent, Rational(-1)) <= 0;
    return e;
}

FppLimit f_double_prime_limit(const ProblemParams& params, double r0) {
    if (!(r0 > 0)) throw std::invalid_argument("f_double_prime_limit needs r0 > 0");
    FppLimit out;
    out.envelope = classify_envelope(params);
    if (out.envelope.divergent) return out;
    const auto spec = compute_spectrum(params, 0);
    const ProfileModel model(params);
    const Frobenius f1 = frobenius(spec, spec.beta);
    const double e = out.envelope.exponent.to_double();
    const double psi_r0 = kummer_value(f1, r0);
    // s^(N-1) s^(-2(p-2)/(p-1)) psi_inf^3 = s^e (M / psi_1(r0))^3.
    auto integrand = [&](double s) {
        if (s <= 0) return 0.0;
        const double M = kummer_M(f1.a, f1.b, 0.25 * s * s).value / psi_r0;
        return std::exp(e * std::log(s) - 0.25 * s * s) * M * M * M;
    };
    boost::math::quadrature::tanh_sinh<double> integrator;
    double err = 0;
    const double I = integrator.integrate(integrand, 0.0, r0, 1e-12, &err);
    const double p = model.p();
    const double pref = p * (p - 1) * std::pow(model.L(), p - 2) / weight(params.N(), r0);
    out.value = -pref * I;
    out.error = pref * err;
    return out;
}

}  // namespace selfsim
