#include <doctest.h>

#include "selfsim/backward_shoot.hpp"

#include <cmath>

using namespace selfsim;

TEST_CASE("weight H and the rho transform") {
    CHECK(weight_H(0, 2) == 0);
    CHECK(weight_H(1, 2) == doctest::Approx(std::exp(-0.25)));
    const ProfileModel m(ProblemParams(5, Rational(3)));
    CHECK(transform_gamma(m) == doctest::Approx(3 - 5 + 2.0));
    const State<2> w{0.7, -0.3};
    const auto y = w_to_y(m, 2.0, w);
    const auto back = y_to_w(m, 0.5, y);
    CHECK(back[0] == doctest::Approx(w[0]).epsilon(1e-15));
    CHECK(back[1] == doctest::Approx(w[1]).epsilon(1e-15));
}

TEST_CASE("Picard stage is a fixed point") {
    const ProfileModel m(ProblemParams(5, Rational(3)));
    const auto st = picard_start(m, 0.9 * m.L());
    CHECK(st.fixed_point_residual <= 1e-12);
    CHECK(st.y(0) == doctest::Approx(0.9 * m.L()).epsilon(1e-14));
    for (double rho : {0.2, 0.5, 1.0}) CHECK(picard_relative_residual(m, st, rho * st.delta) < 1e-8);
}

TEST_CASE("shot at ell = L reproduces the singular solution") {
    const ProfileModel m(ProblemParams(5, Rational(3)));
    const auto s = shoot_from_infinity(m, m.L(), 0.2);
    REQUIRE(s.ok());
    for (double r : {0.2, 1.0, 5.0, 30.0}) CHECK(s.at(m, r)[0] == doctest::Approx(m.phi_inf(r)).epsilon(1e-8));
}

TEST_CASE("u_ell agrees with a difference of shots") {
    const ProfileModel m(ProblemParams(3, Rational(6)));
    const double ell = 0.6, h = 1e-5, r = 1.5;
    const auto s = shoot_from_infinity(m, ell, 1.0);
    const auto p = shoot_from_infinity(m, ell + h, 1.0);
    const auto q = shoot_from_infinity(m, ell - h, 1.0);
    REQUIRE(s.ok());
    const double fd = (p.at(m, r)[0] - q.at(m, r)[0]) / (2 * h);
    CHECK(s.at(m, r)[2] == doctest::Approx(fd).epsilon(1e-5));
}
