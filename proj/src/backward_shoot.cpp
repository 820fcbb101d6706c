#include "selfsim/backward_shoot.hpp"

#include "selfsim/gauss_laguerre.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace selfsim {

double weight_H(double rho, double gamma) {
    if (rho < 0) throw std::domain_error("weight_H needs rho >= 0");
    if (rho == 0) return 0;
    return std::pow(rho, gamma) * std::exp(-0.25 / (rho * rho));
}

double transform_gamma(const ProfileModel& model) { return 3 - model.N() + 4 / model.pm1(); }

State<2> y_to_w(const ProfileModel& model, double rho, const State<2>& y) {
    const double r = 1 / rho;
    const double m = model.decay_exponent();
    const double v = y[0];
    const double vr = -rho * rho * y[1];
    const double rm = std::pow(r, -m);
    return {v * rm, rm * (vr - m * v / r)};
}

State<2> w_to_y(const ProfileModel& model, double r, const State<2>& w) {
    const double m = model.decay_exponent();
    const double rm = std::pow(r, m);
    const double v = w[0] * rm;
    const double vr = rm * (w[1] + m * w[0] / r);
    return {v, -r * r * vr};
}

namespace {

const GaussLaguerre<double>& laguerre_rule(int n) {
    thread_local std::vector<std::pair<int, GaussLaguerre<double>>> cache;
    for (const auto& [k, q] : cache) {
        if (k == n) return q;
    }
    cache.emplace_back(n, gauss_laguerre<double>(n, 0.0, 1e-15));
    return cache.back().second;
}

struct PicardMap {
    const ProfileModel& model;
    double ell;
    double delta;
    double gamma;
    const GaussLaguerre<double>& rule;
    std::vector<double> rho;

    double g(double y) const { return y * (std::pow(std::abs(y), model.pm1()) - model.L_pm1()); }
    double g_prime(double y) const { return model.p() * std::pow(std::abs(y), model.pm1()) - model.L_pm1(); }

    // (1/H(rho)) int_0^rho H(eta) eta^k f(eta) d eta through t = eta^-2/4 - rho^-2/4.
    template <typename F>
    double kernel(double r, int k, const F& f) const {
        double s = 0;
        const double r2 = r * r;
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            const double q = 1 + 4 * rule.x[i] * r2;
            const double eta = r / std::sqrt(q);
            s += rule.w[i] * std::pow(q, -0.5 * (gamma + 3)) * std::pow(eta, k) * f(eta);
        }
        return 2 * r2 * r * s;
    }

    std::pair<std::vector<double>, std::vector<double>> apply(const Chebyshev& y, const Chebyshev& z) const {
        const Chebyshev Z = z.antiderivative();
        std::vector<double> ny(rho.size()), nz(rho.size());
        for (std::size_t j = 0; j < rho.size(); ++j) {
            const double r = rho[j];
            ny[j] = ell + Z(r);
            if (r == 0) {
                nz[j] = 0;
                continue;
            }
            const double i1 = kernel(r, 0, [&](double e) { return g(y(e)); });
            const double i2 = kernel(r, 1, [&](double e) { return g_prime(y(e)) * z(e); });
            nz[j] = -2 * r * g(y(r)) + 2 * (gamma + 1) * i1 + 2 * i2;
        }
        return {ny, nz};
    }
};

double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

PicardStage picard_start(const ProfileModel& model, double ell, const PicardConfig& cfg) {
    if (!(ell > 0)) throw std::invalid_argument("fixed-point stage needs ell > 0");
    if (!model.has_singular()) throw std::invalid_argument("fixed-point stage needs p(N-2) > N");
    if (!(cfg.delta > 0)) throw std::invalid_argument("fixed-point stage needs delta > 0");
    const double eps_ball = cfg.epsilon_ball > 0 ? cfg.epsilon_ball : 0.25 * ell;
    if (!(eps_ball < 0.5 * ell)) throw std::invalid_argument("ball radius must be below ell/2");
    const auto& rule = laguerre_rule(cfg.laguerre_nodes);
    const double gamma = transform_gamma(model);

    double delta = cfg.delta;
    int halvings = 0;
    std::ostringstream failures;
    while (delta >= cfg.delta_floor) {
        PicardMap map{model, ell, delta, gamma, rule, Chebyshev::nodes(0, delta, cfg.cheb_degree)};
        const std::size_t n = map.rho.size();
        std::vector<double> yv(n, ell), zv(n, 0.0);
        PicardStage st;
        st.ell = ell;
        st.delta = delta;
        st.halvings = halvings;
        bool contracted = true;
        bool converged = false;
        for (int it = 0; it < cfg.max_iters; ++it) {
            const auto y = Chebyshev::from_values(0, delta, yv);
            const auto z = Chebyshev::from_values(0, delta, zv);
            auto [ny, nz] = map.apply(y, z);
            const double d = sup_distance(ny, yv) + sup_distance(nz, zv);
            st.distances.push_back(d);
            st.iterations = it + 1;
            yv = std::move(ny);
            zv = std::move(nz);
            double ball = 0;
            for (std::size_t i = 0; i < n; ++i) ball = std::max(ball, std::abs(yv[i] - ell) + std::abs(zv[i]));
            if (ball > eps_ball) {
                contracted = false;
                failures << "delta=" << delta << ": iterate left the ball; ";
                break;
            }
            const std::size_t k = st.distances.size();
            if (k >= 2 && st.distances[k - 2] > 100 * cfg.stage_tol &&
                d > cfg.contraction_ratio * st.distances[k - 2]) {
                contracted = false;
                failures << "delta=" << delta << ": distance ratio " << d / st.distances[k - 2] << "; ";
                break;
            }
            if (d < cfg.stage_tol) {
                converged = true;
                break;
            }
        }
        if (contracted && converged) {
            st.y = Chebyshev::from_values(0, delta, yv);
            st.z = Chebyshev::from_values(0, delta, zv);
            auto [ry, rz] = map.apply(st.y, st.z);
            st.fixed_point_residual = sup_distance(ry, yv) + sup_distance(rz, zv);
            return st;
        }
        if (contracted && !converged) failures << "delta=" << delta << ": no convergence in max_iters; ";
        if (cfg.fixed_delta) break;
        delta *= 0.5;
        ++halvings;
    }
    throw std::runtime_error("fixed-point stage failed to contract: " + failures.str());
}

double picard_relative_residual(const ProfileModel& model, const PicardStage& stage, double rho) {
    const double gamma = transform_gamma(model);
    const double y = stage.y(rho);
    const double z = stage.z(rho);
    const double zp = stage.z.derivative()(rho);
    const double t1 = zp;
    const double t2 = (gamma / rho + 0.5 / (rho * rho * rho)) * z;
    const double t3 = y * (std::pow(std::abs(y), model.pm1()) - model.L_pm1()) / (rho * rho);
    const double scale =
        std::abs(t1) + std::abs(t2) + (std::pow(std::abs(y), model.p()) + model.L_pm1() * std::abs(y)) / (rho * rho);
    return std::abs(t1 + t2 + t3) / scale;
}

State<4> BackwardShot::at(const ProfileModel& model, double r) const {
    if (r <= r_handoff) return profile.at(r);
    const double rho = 1 / r;
    const auto w = y_to_w(model, rho, {stage.y(rho), stage.z(rho)});
    const auto u = y_to_w(model, rho, {y_ell(rho), z_ell(rho)});
    return {w[0], w[1], u[0], u[1]};
}

BackwardShot shoot_from_infinity(const ProfileModel& model, double ell, double r_min, const BackwardConfig& cfg) {
    if (!(r_min > 0)) throw std::invalid_argument("backward shot needs r_min > 0");
    BackwardShot shot;
    shot.ell = ell;
    shot.gamma = transform_gamma(model);
    // The three stages (ell, ell +- h) share one delta: the smallest at which
    // each of them contracts.
    const double h = cfg.fd_rel_step * ell;
    const double ells[3] = {ell, ell + h, ell - h};
    PicardStage stages[3];
    double delta = cfg.picard.delta;
    for (int i = 0; i < 3; ++i) {
        PicardConfig c = cfg.picard;
        c.delta = delta;
        stages[i] = picard_start(model, ells[i], c);
        delta = std::min(delta, stages[i].delta);
    }
    PicardConfig fixed = cfg.picard;
    fixed.delta = delta;
    fixed.fixed_delta = true;
    for (auto& st : stages) {
        if (st.delta != delta) st = picard_start(model, st.ell, fixed);
    }
    shot.stage = stages[0];
    const auto& plus = stages[1];
    const auto& minus = stages[2];
    const auto nodes = Chebyshev::nodes(0, delta, cfg.picard.cheb_degree);
    std::vector<double> dy(nodes.size()), dz(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        dy[i] = (plus.y(nodes[i]) - minus.y(nodes[i])) / (2 * h);
        dz[i] = (plus.z(nodes[i]) - minus.z(nodes[i])) / (2 * h);
    }
    shot.y_ell = Chebyshev::from_values(0, delta, dy);
    shot.z_ell = Chebyshev::from_values(0, delta, dz);

    shot.r_handoff = 1 / delta;
    const auto w = y_to_w(model, delta, {shot.stage.y(delta), shot.stage.z(delta)});
    const auto u = y_to_w(model, delta, {shot.y_ell(delta), shot.z_ell(delta)});
    shot.handoff = {w[0], w[1], u[0], u[1]};

    std::ostringstream diag;
    diag << "fixed-point stage: delta=" << delta << ", " << shot.stage.iterations << " iterations";
    if (r_min >= shot.r_handoff) {
        throw std::invalid_argument("r_min must lie below the hand-off radius 1/delta");
    }
    IntegratorConfig ic;
    ic.rel_tol = cfg.rel_tol;
    ic.abs_tol = cfg.abs_tol;
    ic.r_start = r_min;
    ic.r_end = shot.r_handoff;
    ic.direction = Direction::Backward;
    ic.stop_on_sign_change = true;
    ic.blowup_threshold = cfg.blowup_factor * std::max(ell, model.kappa()) * std::pow(r_min, -model.decay_exponent());
    auto rhs = [&](double r, const State<4>& y, State<4>& dy4) { model.rhs_with_variation(r, y, dy4); };
    shot.profile = integrate<4>(rhs, ic, shot.handoff);
    if (shot.profile.termination == Termination::SignChange) {
        shot.positive = false;
        shot.sign_change_r = shot.profile.event_r;
        diag << "; w changes sign at r = " << shot.sign_change_r;
    } else if (!shot.profile.ok()) {
        diag << "; integration stopped (" << to_string(shot.profile.termination) << ") at r = "
             << shot.profile.final_r;
    }
    shot.diagnostic = diag.str();
    return shot;
}

BackwardShot sensitivity_u_ell(const ProfileModel& model, double ell, double r_min, const BackwardConfig& cfg) {
    return shoot_from_infinity(model, ell, r_min, cfg);
}

}  // namespace selfsim
