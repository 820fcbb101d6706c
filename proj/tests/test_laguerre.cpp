#include <doctest.h>

#include "selfsim/laguerre.hpp"

#include <cmath>

using namespace selfsim;

TEST_CASE("polynomial arithmetic in B") {
    const auto B = RationalPoly::variable();
    const auto p = (B + Rational(1)) * (B + Rational(2));
    CHECK(p == T_product(1, 2));
    CHECK(p.to_string() == "2 + 3*B + 1*B^2");
    CHECK(p(Rational(3)) == 20);
    CHECK(p.shifted(Rational(1)) == T_product(2, 3));
    CHECK(T_product(3, 2) == RationalPoly(Rational(1)));
    CHECK((p - p).is_zero());
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(3, 5) == 0);
}

TEST_CASE("generalized Laguerre polynomial") {
    const auto L = laguerre(2, RationalPoly(Rational(3)));
    const auto c = L.at(Rational(0));
    REQUIRE(c.size() == 3);
    CHECK(c[0] == 10);
    CHECK(c[1] == -5);
    CHECK(c[2] == rational(1, 2));
}

TEST_CASE("S values at B = 1") {
    CHECK(S_sum(2, 0, 0, Rational(1)) == rational(1, 30));
    CHECK(S_sum(2, 1, 1, Rational(1)) == rational(53, 60));
    CHECK(S_sum(2, 2, 2, Rational(1)) == rational(79, 15));
    CHECK(S_symbolic(2, 2, 2)(Rational(1)) == rational(79, 15));
    CHECK(S_closed_form_k1_zero(2, 0)(Rational(1)) == rational(1, 30));
}

TEST_CASE("evaluation next to a pole is refused") {
    CHECK_THROWS_AS(S_sum(1, 1, 1, Rational(0)), PoleError);
    CHECK_THROWS_AS(S_symbolic(1, 1, 1)(rational(1, 2000000000)), PoleError);
    CHECK_NOTHROW(S_symbolic(1, 1, 1)(rational(1, 1000)));
}

TEST_CASE("reduction step and full reduction") {
    for (int j = 2; j <= 4; ++j)
        for (int k = 1; k <= j; ++k)
            CHECK(S_reduction_step(j, k, k, Rational(3)) == S_sum(j, k, k, Rational(3)));
    for (int j = 2; j <= 5; ++j) {
        for (int k = 0; k <= j; ++k) {
            const auto scaled = S_scaled_by_reduction(j, k);
            const auto direct = S_symbolic(j, k, k);
            CHECK(scaled == direct.numerator * T_product(0, j - k - 1));
            CHECK(scaled.all_coefficients_nonnegative());
        }
    }
}

TEST_CASE("Q_j by two routes") {
    const auto Q2 = Q_symbolic(2);
    CHECK(Q2.to_string() == "216 + 130*B + 23*B^2 + 1*B^3");
    CHECK(Q2(Rational(1)) == 370);
    for (int j = 0; j <= 6; ++j) {
        CHECK(Q_by_moments(j) == Q_by_S_assembly(j));
        CHECK(Q_by_moments(j).all_coefficients_positive());
    }
}

TEST_CASE("orthogonality and recurrence") {
    CHECK(ortho_moment(1, 0, 0).is_zero());
    CHECK(ortho_moment(1, 1, 0)(Rational(2)) == 2);
    for (int m = 0; m <= 3; ++m)
        for (int n = 0; n <= 3; ++n) CHECK(ortho_moment(m, n, 1) == ortho_expected(m, n, 1));
    for (int j = 0; j <= 3; ++j)
        for (int i = 0; i <= j; ++i) CHECK(recurrence_holds(j, i));
}

TEST_CASE("Gauss-Laguerre quadrature matches the exact value") {
    for (const Rational& B : {rational(1, 2), rational(7)}) {
        const auto q = Q_quadrature(3, B);
        const double exact = to_double(Q_symbolic(3)(B));
        CHECK(std::abs(q.value - exact) <= 1e-12 * exact);
        CHECK(q.error_bound < 1e-20 * exact);
    }
    CHECK_THROWS(Q_quadrature(2, Rational(0)));
}
