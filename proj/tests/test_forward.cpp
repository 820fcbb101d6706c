#include <doctest.h>

#include "selfsim/enumerator.hpp"
#include "selfsim/forward_shoot.hpp"

#include <cmath>

using namespace selfsim;

TEST_CASE("series coefficients at the origin") {
    const ProfileModel m(ProblemParams(3, Rational(6)));
    const double alpha = 2;
    const auto c = series_coefficients(m, alpha);
    CHECK(c.a2 == doctest::Approx((alpha / 5 - std::pow(alpha, 6)) / 6).epsilon(1e-14));
    const auto s = series_start(m, alpha, 1e-3, 1e-10);
    CHECK(s.w == doctest::Approx(alpha + c.a2 * 1e-6 + c.a4 * 1e-12).epsilon(1e-15));
    CHECK(s.z == doctest::Approx(1 + c.b2 * 1e-6 + c.b4 * 1e-12).epsilon(1e-15));
    CHECK(s.truncation_bound <= 1e-10);
    CHECK_THROWS_AS(series_start(m, 50, 0.5, 1e-12), std::invalid_argument);
    const auto a = series_start_auto(m, 50, 0.5, 1e-14, 1e-12);
    CHECK(a.truncation_bound <= 1e-14 + 50e-12);
}

TEST_CASE("constant and sign-changing shots") {
    const ProfileModel m(ProblemParams(3, Rational(6)));
    const auto k = shoot_from_origin(m, m.kappa());
    CHECK(k.constant_branch);
    CHECK(k.classification == ShotClass::PositiveOnWindow);

    const ProfileModel m3(ProblemParams(3, Rational(3)));
    const auto s = shoot_from_origin(m3, 2);
    CHECK(s.classification == ShotClass::SignChange);
    CHECK(s.sign_change_r > 0);
    CHECK(std::abs(s.at(m3, s.sign_change_r)[0]) < 1e-10);
}

TEST_CASE("asymptotic fit recovers the singular solution") {
    const ProfileModel m(ProblemParams(3, Rational(6)));
    const auto fit = fit_asymptotics(m, [&](double r) { return m.phi_inf(r); }, 5, 20);
    CHECK(fit.ell == doctest::Approx(m.L()).epsilon(1e-12));
    CHECK(std::abs(fit.c) < 1e-9);
    CHECK(fit.residual < 1e-12);
}

TEST_CASE("formal decay series") {
    const ProfileModel m(ProblemParams(3, Rational(6)));
    const double ell = 0.6;
    const auto v = formal_decay_series(m, ell, 3);
    REQUIRE(v.size() == 3);
    CHECK(v[0] == ell);
    // v = ell (1 - c r^-2 + ...) with c = ell^(p-1) - L^(p-1)
    CHECK(v[1] == doctest::Approx(-ell * (std::pow(ell, 5) - m.L_pm1())).epsilon(1e-12));
}

TEST_CASE("log-derivative correction of a pure power") {
    const ProfileModel m(ProblemParams(3, Rational(6)));
    // w = r^(-2/(p-1)) (1 + r^-2): g = w_r/w + m/r = -2 r^-3 / (1 + r^-2)
    auto w = [&](double r) {
        const double k = m.decay_exponent();
        const double val = std::pow(r, -k) * (1 + 1 / (r * r));
        const double der = -k * val / r - 2 * std::pow(r, -k - 3);
        return std::pair{val, der};
    };
    const auto f = fit_log_derivative_correction(m, w, 50, 400);
    CHECK(f.exponent == doctest::Approx(-3).epsilon(1e-3));
    CHECK(f.amplitude < 0);
}

TEST_CASE("F' agrees with centered differences") {
    const ProfileModel m(ProblemParams(12, rational(79, 20)));
    const double a = 3, r0 = 1;
    const double F1 = curve_derivative_F1(m, a, r0);
    auto end = [&](double x) { return integrate_from_origin(m, x, r0, 1e-13, 1e-15).final_state; };
    const double h = 1e-3 * a;
    const auto yp = end(a + h), ym = end(a - h);
    CHECK((yp[1] - ym[1]) / (yp[0] - ym[0]) == doctest::Approx(F1).epsilon(1e-5));
    const auto F2 = curve_derivative_F2(m, a, r0);
    CHECK(F2.value < 0);
}
