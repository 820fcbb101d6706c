#include <doctest.h>

#include "selfsim/operator_oracle.hpp"
#include "selfsim/spectral.hpp"

#include <cmath>

using namespace selfsim;

TEST_CASE("Kummer function") {
    CHECK(kummer_M(1, 1, 2.5).value == doctest::Approx(std::exp(2.5)).epsilon(1e-15));
    CHECK(kummer_M(-2, 3, 1.5).value == doctest::Approx(1 - 2 * 1.5 / 3 + 1.5 * 1.5 / 12).epsilon(1e-15));
    CHECK_THROWS_AS(kummer_M(0.5, -2, 1), std::domain_error);
    const auto c = kummer_polynomial(2, Rational(3));
    REQUIRE(c.size() == 3);
    CHECK(c[1] == rational(-2, 3));
    CHECK(c[2] == rational(1, 12));
    CHECK(kummer_M_exact(2, Rational(3), Rational(1)) == rational(5, 12));
}

TEST_CASE("spectrum at p_L for N = 12") {
    const auto s = compute_spectrum(ProblemParams(12, Rational(4)), 5);
    CHECK(s.V == rational(224, 9));
    CHECK(s.discriminant == rational(4, 9));
    CHECK(*s.beta.as_rational() == rational(-14, 3));
    CHECK(*s.beta_minus.as_rational() == rational(-16, 3));
    REQUIRE(s.zero_eig);
    CHECK(*s.zero_eig == 2);
    for (int j = 0; j <= 5; ++j) CHECK(*s.lambda[j].as_rational() == Rational(j - 2));
}

TEST_CASE("eigenfunctions have j zeros and solve the equation") {
    const auto s = compute_spectrum(ProblemParams(12, rational(79, 20)), 4);
    for (int j = 0; j <= 4; ++j) {
        const EigenFn psi(s, j);
        CHECK(psi.count_zeros(50) == j);
        for (double r : {0.1, 1.0, 3.0, 10.0}) CHECK(psi.relative_residual(r) < 1e-12);
        CHECK(psi.loglog_slope(1e-4, 1e-3) == doctest::Approx(s.beta.to_double()).epsilon(1e-5));
    }
}

TEST_CASE("spectrum needs p > p_JL") {
    CHECK_THROWS_AS(compute_spectrum(ProblemParams(12, Rational(3)), 2), std::domain_error);
    CHECK_THROWS_AS(compute_spectrum(ProblemParams(3, Rational(6)), 2), std::domain_error);
}

TEST_CASE("zero-mode test separates decay from growth") {
    const auto at_pL = psi1_psi2_lambda0(ProblemParams(12, Rational(4)));
    CHECK(at_pL.verdict == ZeroModeTest::Verdict::DecaysLikeSingular);
    CHECK(at_pL.wronskian_drift < 1e-7);
    const auto below = psi1_psi2_lambda0(ProblemParams(12, rational(79, 20)));
    CHECK(below.verdict == ZeroModeTest::Verdict::Grows);

    const auto s = compute_spectrum(ProblemParams(12, rational(79, 20)), 0);
    for (double r : {0.5, 2.0}) {
        CHECK(below.pair.at(r)[0] == doctest::Approx(psi1_closed_form(s, r)).epsilon(1e-8));
        CHECK(below.pair.at(r)[1] == doctest::Approx(psi1_closed_form_derivative(s, r)).epsilon(1e-8));
    }
}

TEST_CASE("envelope of the F'' limit at p_3") {
    const auto e30 = classify_envelope(ProblemParams(30, rational(24, 19)));
    CHECK(*e30.exponent.as_rational() == rational(-31, 5));
    CHECK(e30.divergent);
    const auto e60 = classify_envelope(ProblemParams(60, rational(54, 49)));
    CHECK(*e60.exponent.as_rational() == rational(-1, 5));
    CHECK_FALSE(e60.divergent);
    const auto lim = f_double_prime_limit(ProblemParams(60, rational(54, 49)), 1);
    REQUIRE(lim.value);
    CHECK(*lim.value == doctest::Approx(-1.225305742e-26).epsilon(1e-8));
    CHECK_FALSE(f_double_prime_limit(ProblemParams(30, rational(24, 19)), 1).value);
}

TEST_CASE("discretized operator reproduces the lowest eigenvalues") {
    const auto ev = discretized_eigenvalues(ProblemParams(12, Rational(4)), 4);
    REQUIRE(ev.size() == 4);
    for (int j = 0; j < 4; ++j) CHECK(std::abs(ev[j] - (j - 2)) < 1e-5);
    CHECK_THROWS(discretized_eigenvalues(ProblemParams(12, Rational(3)), 2));
}
