#include <doctest.h>

#include "selfsim/exponents.hpp"

#include <cmath>

using namespace selfsim;

TEST_CASE("rational parsing is exact") {
    CHECK(parse_rational("3.95") == rational(79, 20));
    CHECK(parse_rational("-3/4") == rational(-3, 4));
    CHECK(parse_rational("1e-3") == rational(1, 1000));
    CHECK(parse_rational("2.5E2") == Rational(250));
    CHECK(to_string(rational(6, 4)) == "3/2");
    CHECK_THROWS(parse_rational("abc"));
    CHECK_THROWS(parse_rational("1/0"));
}

TEST_CASE("quadratic surd sign and ordering") {
    QuadraticSurd s(Rational(3), Rational(-1), Rational(9));  // 3 - 3 = 0
    CHECK(s.is_rational());
    CHECK(s.sign() == 0);
    QuadraticSurd t(Rational(1), Rational(1), Rational(2));  // 1 + sqrt2
    CHECK(compare(t, rational(5, 2)) < 0);
    CHECK(compare(t, rational(12, 5)) > 0);
    CHECK(t.to_double() == doctest::Approx(1 + std::sqrt(2.0)));
    QuadraticSurd u(Rational(0), Rational(1), Rational(3));
    CHECK(compare(t, u) > 0);
}

TEST_CASE("critical exponents of small dimensions") {
    auto c3 = compute_critical_exponents(3);
    REQUIRE(c3.p_S.is_finite());
    CHECK(c3.p_S.value() == 5);
    CHECK(c3.p_JL.is_infinite());
    CHECK(c3.p_L.is_infinite());
    CHECK(compute_critical_exponents(2).p_S.is_infinite());

    auto c11 = compute_critical_exponents(11);
    CHECK(c11.p_S.value() == rational(13, 9));
    CHECK(c11.p_L.value() == 7);
    CHECK(c11.p_JL.value().to_double() == doctest::Approx(1 + (28 + 8 * std::sqrt(10.0)) / 9).epsilon(1e-15));
    CHECK(c11.p_JL.value().to_double() == doctest::Approx(6.92203).epsilon(1e-6));
}

TEST_CASE("kappa and L") {
    auto e = compute_exponents(ProblemParams(3, Rational(5)));
    REQUIRE(e.L_pm1.has_value());
    CHECK(*e.L_pm1 == rational(1, 4));
    CHECK(*e.L == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(compute_exponents(ProblemParams(3, Rational(2))).kappa == 1.0);
    auto e12 = compute_exponents(ProblemParams(12, Rational(4)));
    CHECK(*e12.L_pm1 * 4 == rational(224, 9));
    // p(N-2) <= N: no singular solution
    CHECK_FALSE(compute_exponents(ProblemParams(3, Rational(3))).L_pm1.has_value());
    CHECK_FALSE(compute_exponents(ProblemParams(4, Rational(2))).L_pm1.has_value());
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(ProblemParams(3, Rational(1)), std::invalid_argument);
    CHECK_THROWS_AS(ProblemParams(0, Rational(2)), std::invalid_argument);
    CHECK_THROWS_AS(compute_pj(12, 1), std::invalid_argument);
}

TEST_CASE("regime classification") {
    CHECK(classify_regime(ProblemParams(3, Rational(3))) == Regime::AtMostSobolev);
    CHECK(classify_regime(ProblemParams(3, Rational(6))) == Regime::SobolevToJL);
    CHECK(classify_regime(ProblemParams(12, parse_rational("3.95"))) == Regime::JLToLepin);
    CHECK(classify_regime(ProblemParams(12, Rational(4))) == Regime::AtLepin);
    CHECK(classify_regime(ProblemParams(12, Rational(5))) == Regime::AboveLepin);
    CHECK(ProblemParams(3, Rational(6)).supercritical());
    CHECK_FALSE(ProblemParams(3, Rational(5)).supercritical());
}

TEST_CASE("exponents p_j") {
    auto p2 = compute_pj(12, 2);
    REQUIRE(p2.value);
    CHECK(*p2.value == 4);
    auto p3 = compute_pj(30, 3);
    REQUIRE(p3.value);
    CHECK(*p3.value == Rational(1) + rational(10, 38));
    CHECK(p3.above_pJL);
    // N = 26 sits exactly on the threshold (2j-1)^2 + 1 for j = 3.
    auto p326 = compute_pj(26, 3);
    REQUIRE(p326.value);
    CHECK_FALSE(p326.above_pJL);
    CHECK(compare(compute_critical_exponents(26).p_JL.value(), *p326.value) == 0);
    CHECK_FALSE(compute_pj(5, 3).value.has_value());
    // N = 12: the closed form gives p_3 = 6 > p_L, where lambda_3 > 0.
    auto p312 = compute_pj(12, 3);
    CHECK(*p312.value == 6);
    CHECK(p312.above_pJL);
    CHECK_FALSE(p312.eigenvalue_zero);
}

TEST_CASE("ordering and p_2 = p_L over a range of dimensions") {
    for (int N = 11; N <= 200; ++N) {
        auto c = compute_critical_exponents(N);
        CHECK(compare(c.p_JL.value(), c.p_S.value()) > 0);
        CHECK(compare(c.p_JL.value(), c.p_L.value()) < 0);
        auto p2 = compute_pj(N, 2);
        REQUIRE(p2.value);
        CHECK(*p2.value == c.p_L.value());
    }
    for (int j = 2; j <= 5; ++j) {
        for (int N = 11; N <= 100; ++N) {
            auto pj = compute_pj(N, j);
            const bool expected = N > (2 * j - 1) * (2 * j - 1) + 1;
            CHECK(pj.zero_eigenvalue_above_pJL() == expected);
        }
    }
}
