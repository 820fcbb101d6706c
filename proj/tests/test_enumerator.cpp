#include <doctest.h>

#include "selfsim/enumerator.hpp"

#include <cmath>

using namespace selfsim;

TEST_CASE("geometric alpha grid") {
    const auto g = geometric_alpha_grid(1.0, 16.0, 4);
    REQUIRE(g.size() == 17);
    CHECK(g.front() == 1.0);
    CHECK(g.back() == doctest::Approx(16.0));
    CHECK(g[4] == doctest::Approx(2.0));
}

TEST_CASE("enumeration for p <= p_S returns kappa only") {
    const auto r = enumerate_solutions(ProblemParams(3, Rational(3)));
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].constant);
    CHECK(std::isnan(r.records[0].ell));
}

TEST_CASE("first nonconstant solution for N = 3, p = 6") {
    const ProblemParams params(3, Rational(6));
    const ProfileModel m(params);
    SearchConfig cfg;
    cfg.alpha_max = 50;
    const auto r = enumerate_solutions(params, cfg);
    REQUIRE(r.records.size() >= 3);
    CHECK(r.records[0].constant);
    const auto& s = r.records[1];
    CHECK(s.alpha == doctest::Approx(3.28487638582).epsilon(1e-9));
    CHECK(s.ell == doctest::Approx(0.5137341423).epsilon(1e-8));
    CHECK(s.two_sided_error <= 1e-6);
    CHECK(s.ell_roundtrip_error <= 1e-3);
    CHECK(r.records[2].alpha == doctest::Approx(10.4344).epsilon(1e-5));

    const auto polished = polish_match(m, r.r0, s.alpha * 1.001, s.ell * 0.999, cfg);
    REQUIRE(polished);
    CHECK(polished->alpha == doctest::Approx(s.alpha).epsilon(1e-9));

    const auto a = record_asymptotics(m, s, r.r0);
    CHECK(a.ell_window_change <= 1e-4);
    CHECK(a.c_error <= 0.05);
    CHECK_THROWS(record_asymptotics(m, r.records[0], r.r0));
}

TEST_CASE("curve tables split into monotone branches") {
    const ProfileModel m(ProblemParams(3, Rational(6)));
    const auto F = build_F(m, geometric_alpha_grid(m.kappa(), 100, 4), 1.0);
    CHECK(F.failures.empty());
    for (const auto& b : F.branches) {
        for (std::size_t i = 1; i < b.points.size(); ++i) {
            const double d0 = b.points[1].zeta - b.points[0].zeta;
            CHECK((b.points[i].zeta - b.points[i - 1].zeta) * d0 > 0);
        }
        const double mid = 0.5 * (b.zeta_min() + b.zeta_max());
        CHECK(b.contains(mid));
    }
}
