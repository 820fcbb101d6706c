#include <doctest.h>

#include "selfsim/profile.hpp"

#include <cmath>

using namespace selfsim;

namespace {

IntegratorConfig config(double a, double b, double rtol = 1e-12, double atol = 1e-14) {
    IntegratorConfig c;
    c.r_start = a;
    c.r_end = b;
    c.rel_tol = rtol;
    c.abs_tol = atol;
    return c;
}

}  // namespace

TEST_CASE("integrator reproduces a harmonic oscillator and its dense output") {
    auto rhs = [](double, const State<2>& y, State<2>& dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
    };
    auto traj = integrate<2>(rhs, config(0, 10), {0.0, 1.0});
    REQUIRE(traj.ok());
    CHECK(traj.final_state[0] == doctest::Approx(std::sin(10.0)).epsilon(1e-10));
    for (double r = 0.05; r < 10; r += 0.37) {
        CHECK(std::abs(traj.at(r)[0] - std::sin(r)) < 1e-10);
    }
    CHECK_THROWS_AS(traj.at(10.5), std::out_of_range);
}

TEST_CASE("integrator runs backward") {
    auto rhs = [](double, const State<1>& y, State<1>& dy) { dy[0] = y[0]; };
    auto cfg = config(0, 2);
    cfg.direction = Direction::Backward;
    auto traj = integrate<1>(rhs, cfg, {std::exp(2.0)});
    REQUIRE(traj.ok());
    CHECK(traj.final_r == 0);
    CHECK(traj.final_state[0] == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(traj.at(1.0)[0] == doctest::Approx(std::exp(1.0)).epsilon(1e-11));
    auto nodes = traj.nodes();
    CHECK(nodes.front().first == 0);
    CHECK(nodes.back().first == 2);
}

TEST_CASE("sign-change event is polished") {
    auto rhs = [](double, const State<2>& y, State<2>& dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
    };
    auto cfg = config(0, 10);
    cfg.stop_on_sign_change = true;
    auto traj = integrate<2>(rhs, cfg, {1.0, 0.0});
    CHECK(traj.termination == Termination::SignChange);
    CHECK(std::abs(traj.event_r - M_PI / 2) < 1e-11);
}

TEST_CASE("blow-up event and step underflow") {
    auto rhs = [](double, const State<1>& y, State<1>& dy) { dy[0] = y[0] * y[0]; };
    auto cfg = config(0, 2);
    cfg.blowup_threshold = 1e6;
    auto traj = integrate<1>(rhs, cfg, {1.0});
    CHECK(traj.termination == Termination::BlowUp);
    CHECK(traj.final_r < 1.0);

    auto cfg2 = config(0, 2);
    auto traj2 = integrate<1>(rhs, cfg2, {1.0});
    CHECK_FALSE(traj2.ok());
    CHECK(traj2.final_r < 1.0);
    CHECK(traj2.final_r > 0.99);
}

TEST_CASE("invalid configuration is rejected") {
    auto rhs = [](double, const State<1>&, State<1>& dy) { dy[0] = 0; };
    CHECK_THROWS_AS(integrate<1>(rhs, config(1, 1), {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(integrate<1>(rhs, config(0, 1, 0), {0.0}), std::invalid_argument);
}

TEST_CASE("profile right-hand side values") {
    ProfileModel m(ProblemParams(3, Rational(5)));
    State<2> dy;
    m.rhs(1.0, {1.0, 0.0}, dy);
    CHECK(dy[0] == 0);
    CHECK(dy[1] == doctest::Approx(-0.75).epsilon(1e-15));
    m.rhs(1.3, {m.kappa(), 0.0}, dy);
    CHECK(dy[1] == 0.0);
    CHECK_THROWS_AS(m.rhs(0.0, {1.0, 0.0}, dy), std::domain_error);
    // singular solution
    const double r = 1.0;
    CHECK(std::abs(m.residual(r, m.phi_inf(r), m.phi_inf_r(r), m.phi_inf_rr(r))) < 1e-14);
    for (double rr : {0.3, 2.0, 7.5}) {
        m.rhs(rr, {m.phi_inf(rr), m.phi_inf_r(rr)}, dy);
        CHECK(dy[1] == doctest::Approx(m.phi_inf_rr(rr)).epsilon(1e-13));
    }
}

TEST_CASE("variational coefficients") {
    for (double p : {1.5, 3.0, 6.0, 3.95}) {
        ProfileModel m(ProblemParams(12, p));
        CHECK(m.variational_coefficient(m.kappa()) == doctest::Approx(1.0).epsilon(1e-14));
    }
    ProfileModel m(ProblemParams(12, Rational(4)));
    // around phi_inf at r = 1: -1/3 + p L^{p-1} = -1/3 + 224/9
    CHECK(m.variational_coefficient(m.phi_inf(1.0)) == doctest::Approx(-1.0 / 3 + 224.0 / 9).epsilon(1e-13));
    State<4> dy;
    m.rhs_with_variation(2.0, {1.0, 0.2, 0.0, 0.0}, dy);
    CHECK(dy[2] == 0);
    CHECK(dy[3] == 0);
}

TEST_CASE("equilibrium is preserved exactly") {
    for (auto [N, p] : {std::pair{3, Rational(6)}, std::pair{12, parse_rational("3.95")}}) {
        ProfileModel m{ProblemParams(N, p)};
        auto rhs = [&](double r, const State<2>& y, State<2>& dy) { m.rhs(r, y, dy); };
        auto traj = integrate<2>(rhs, config(1e-3, 20), {m.kappa(), 0.0});
        REQUIRE(traj.ok());
        double dev = 0;
        for (auto& [r, y] : traj.nodes()) dev = std::max(dev, std::abs(y[0] - m.kappa()));
        CHECK(dev <= 10 * 1e-14);
    }
}

TEST_CASE("singular solution is preserved over a decade") {
    ProfileModel m(ProblemParams(3, Rational(5)));
    auto rhs = [&](double r, const State<2>& y, State<2>& dy) { m.rhs(r, y, dy); };
    const double rtol = 1e-12;
    auto traj = integrate<2>(rhs, config(0.5, 5, rtol), {m.phi_inf(0.5), m.phi_inf_r(0.5)});
    REQUIRE(traj.ok());
    double drift = 0;
    for (double r = 0.5; r <= 5; r += 0.01) drift = std::max(drift, std::abs(traj.at(r)[0] / m.phi_inf(r) - 1));
    CHECK(drift <= 100 * rtol);
}

TEST_CASE("weight and wronskian") {
    CHECK(weight(3, 2.0) == doctest::Approx(4 * std::exp(-1.0)).epsilon(1e-15));
    CHECK(wronskian(0.3, 1.2, 0.3, 1.2) == 0);
    const double r0 = 1.7;
    const int N = 5;
    CHECK(wronskian(1.0, 0.42, 0.0, -1 / weight(N, r0)) * weight(N, r0) == doctest::Approx(1.0));
}

TEST_CASE("omega times the wronskian is conserved along linearized pairs") {
    ProfileModel m(ProblemParams(3, Rational(6)));
    auto rhs = [&](double r, const State<6>& y, State<6>& dy) { rhs_with_two_variations(m, r, y, dy); };
    const double r0 = 0.1;
    // base solution: the singular profile
    State<6> y0{m.phi_inf(r0), m.phi_inf_r(r0), 1.0, 0.3, 0.0, -1 / weight(3, r0)};
    auto traj = integrate<6>(rhs, config(r0, 10, 1e-13, 1e-300), y0);
    INFO(to_string(traj.termination), " at ", traj.final_r);
    REQUIRE(traj.ok());
    for (double r = r0; r <= 10; r += 0.25) {
        auto y = traj.at(r);
        const double ow = weight(3, r) * wronskian(y[2], y[3], y[4], y[5]);
        CHECK(std::abs(ow - 1) < 1e-7);
    }
}

TEST_CASE("integrator error scales with the nominal order") {
    // perturbation of kappa: error against a tight reference
    ProfileModel m(ProblemParams(3, Rational(6)));
    auto rhs = [&](double r, const State<2>& y, State<2>& dy) { m.rhs(r, y, dy); };
    const State<2> y0{m.kappa() * 1.01, 0.0};
    auto ref = integrate<2>(rhs, config(0.1, 3, 1e-14, 1e-16), y0);
    double errs[2];
    std::size_t steps[2];
    int k = 0;
    for (double tol : {1e-6, 1e-8}) {
        IntegratorConfig c = config(0.1, 3, tol, tol);
        auto t = integrate<2>(rhs, c, y0);
        errs[k] = std::abs(t.final_state[0] - ref.final_state[0]);
        steps[k] = t.accepted_steps;
        ++k;
    }
    // error per step count: e ~ n^-5
    const double order = std::log(errs[0] / errs[1]) / std::log(double(steps[1]) / steps[0]);
    CHECK(order > 3.5);
    CHECK(order < 7);
}
