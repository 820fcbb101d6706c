#include "selfsim/forward_shoot.hpp"

#include "selfsim/least_squares.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace selfsim {

SeriesCoefficients series_coefficients(const ProfileModel& model, double alpha) {
    const int N = model.N();
    const double f = model.f(alpha);
    const double f1 = model.f_prime(alpha);
    const double f2 = model.f_second(alpha);
    SeriesCoefficients s;
    s.a2 = f / (2.0 * N);
    s.a4 = s.a2 * (1 + f1) / (4.0 * (N + 2));
    s.a6 = (s.a4 * (2 + f1) + 0.5 * f2 * s.a2 * s.a2) / (6.0 * (N + 4));
    s.b2 = f1 / (2.0 * N);
    s.b4 = (s.b2 * (1 + f1) + s.a2 * f2) / (4.0 * (N + 2));
    return s;
}

SeriesStart series_start(const ProfileModel& model, double alpha, double r_eps, double tolerance) {
    if (!(alpha > 0)) throw std::invalid_argument("series start needs alpha > 0");
    if (!(r_eps > 0)) throw std::invalid_argument("series start needs r_eps > 0");
    const auto c = series_coefficients(model, alpha);
    const double r2 = r_eps * r_eps;
    SeriesStart s;
    s.r_eps = r_eps;
    s.truncation_bound = std::abs(c.a6) * r2 * r2 * r2;
    if (s.truncation_bound > tolerance) {
        std::ostringstream os;
        os << "r_eps = " << r_eps << " too large: series truncation bound " << s.truncation_bound;
        throw std::invalid_argument(os.str());
    }
    s.w = alpha + c.a2 * r2 + c.a4 * r2 * r2;
    s.w_r = 2 * c.a2 * r_eps + 4 * c.a4 * r2 * r_eps;
    s.z = 1 + c.b2 * r2 + c.b4 * r2 * r2;
    s.z_r = 2 * c.b2 * r_eps + 4 * c.b4 * r2 * r_eps;
    return s;
}

SeriesStart series_start_auto(const ProfileModel& model, double alpha, double r_eps_max, double abs_tol,
                              double rel_tol) {
    if (!(alpha > 0)) throw std::invalid_argument("series start needs alpha > 0");
    const auto c = series_coefficients(model, alpha);
    const double tol = abs_tol + rel_tol * alpha;
    double r = r_eps_max;
    for (int i = 0; i < 400 && std::abs(c.a6) * std::pow(r, 6) > tol; ++i) r *= 0.5;
    return series_start(model, alpha, r, tol);
}

std::string to_string(ShotClass c) {
    switch (c) {
        case ShotClass::PositiveOnWindow: return "positive-on-window";
        case ShotClass::SignChange: return "sign-change";
        case ShotClass::Diverged: return "diverged";
    }
    return "unknown";
}

State<4> ForwardShot::at(const ProfileModel& model, double r) const {
    if (r < start.r_eps) {
        const auto c = series_coefficients(model, alpha);
        const double r2 = r * r;
        return {alpha + c.a2 * r2 + c.a4 * r2 * r2, 2 * c.a2 * r + 4 * c.a4 * r2 * r,
                1 + c.b2 * r2 + c.b4 * r2 * r2, 2 * c.b2 * r + 4 * c.b4 * r2 * r};
    }
    return profile.at(r);
}

Trajectory<4> integrate_from_origin(const ProfileModel& model, double alpha, double r_end, double rel_tol,
                                    double abs_tol, double r_eps) {
    const auto s = series_start_auto(model, alpha, std::min(r_eps, 0.5 * r_end), abs_tol, rel_tol);
    IntegratorConfig cfg;
    cfg.rel_tol = rel_tol;
    cfg.abs_tol = abs_tol;
    cfg.r_start = s.r_eps;
    cfg.r_end = r_end;
    cfg.stop_on_sign_change = true;
    cfg.blowup_threshold = 1e3 * std::max(alpha, model.kappa());
    auto rhs = [&](double r, const State<4>& y, State<4>& dy) { model.rhs_with_variation(r, y, dy); };
    return integrate<4>(rhs, cfg, {s.w, s.w_r, s.z, s.z_r});
}

AsymptoticFit fit_asymptotics(const ProfileModel& model, const Trajectory<4>& traj, double r_lo, double r_hi,
                              int samples) {
    return fit_asymptotics(model, [&](double r) { return traj.at(r)[0]; }, r_lo, r_hi, samples);
}

AsymptoticFit fit_asymptotics(const ProfileModel& model, const std::function<double(double)>& w, double r_lo,
                              double r_hi, int samples) {
    if (!(r_lo > 0 && r_lo < r_hi)) throw std::invalid_argument("fit interval must satisfy 0 < r_lo < r_hi");
    const double m = model.decay_exponent();
    std::vector<double> c0, c1, c2, v;
    for (int i = 0; i < samples; ++i) {
        const double r = r_lo + (r_hi - r_lo) * i / (samples - 1);
        const double x = 1 / (r * r);
        c0.push_back(1);
        c1.push_back(x);
        c2.push_back(x * x);
        v.push_back(w(r) * std::pow(r, m));
    }
    const auto sol = least_squares({c0, c1, c2}, v);
    AsymptoticFit fit;
    fit.ell = sol[0];
    fit.c = -sol[1] / sol[0];
    fit.d = sol[2] / sol[0];
    fit.r_lo = r_lo;
    fit.r_hi = r_hi;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double model_v = sol[0] + sol[1] * c1[i] + sol[2] * c2[i];
        fit.residual = std::max(fit.residual, std::abs(model_v - v[i]) / std::abs(v[i]));
    }
    return fit;
}

LogDerivativeFit fit_log_derivative_correction(const ProfileModel& model,
                                               const std::function<std::pair<double, double>(double)>& w_and_wr,
                                               double r_lo, double r_hi, int samples) {
    if (!(r_lo > 0 && r_lo < r_hi)) throw std::invalid_argument("fit interval must satisfy 0 < r_lo < r_hi");
    const double m = model.decay_exponent();
    std::vector<double> x, y;
    double sign = 1;
    for (int i = 0; i < samples; ++i) {
        const double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / (samples - 1));
        const auto [w, wr] = w_and_wr(r);
        const double g = wr / w + m / r;
        if (g == 0) continue;
        sign = g > 0 ? 1 : -1;
        x.push_back(std::log(r));
        y.push_back(std::log(std::abs(g)));
    }
    if (x.size() < 2) throw std::runtime_error("log-derivative correction vanishes on the fit interval");
    const auto line = fit_line(x, y);
    return {line.slope, sign * std::exp(line.intercept), r_lo, r_hi};
}

namespace {

double reliability_horizon(const Trajectory<4>& traj, double alpha, const ForwardConfig& cfg) {
    // Envelope of |w_alpha| over the trailing window [0.8 r, r], which bridges
    // isolated zeros of w_alpha without remembering its size near the origin.
    const auto nodes = traj.nodes();
    std::deque<std::size_t> window;
    std::size_t tail = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double r = nodes[i].first;
        while (!window.empty() && std::abs(nodes[window.back()].second[2]) <= std::abs(nodes[i].second[2])) {
            window.pop_back();
        }
        window.push_back(i);
        while (nodes[tail].first < 0.8 * r) ++tail;
        while (window.front() < tail) window.pop_front();
        const double envelope = std::abs(nodes[window.front()].second[2]);
        if (cfg.seed_error * alpha * envelope > cfg.horizon_tol * std::abs(nodes[i].second[0])) return r;
    }
    return traj.r_max();
}

}  // namespace

ForwardShot shoot_from_origin(const ProfileModel& model, double alpha, const ForwardConfig& cfg) {
    if (!(alpha > 0)) throw std::invalid_argument("shooting from the origin needs alpha > 0");
    if (!(cfg.window_end > cfg.r_eps)) throw std::invalid_argument("window_end must exceed r_eps");
    ForwardShot shot;
    shot.alpha = alpha;
    shot.constant_branch = alpha == model.kappa();
    shot.start = series_start_auto(model, alpha, cfg.r_eps, cfg.abs_tol, cfg.rel_tol);

    IntegratorConfig ic;
    ic.rel_tol = cfg.rel_tol;
    ic.abs_tol = cfg.abs_tol;
    ic.r_start = shot.start.r_eps;
    ic.r_end = cfg.window_end;
    ic.stop_on_sign_change = true;
    ic.blowup_threshold = cfg.blowup_factor * std::max(alpha, model.kappa());
    ic.component_cap = 1e200;
    auto rhs = [&](double r, const State<4>& y, State<4>& dy) { model.rhs_with_variation(r, y, dy); };
    shot.profile = integrate<4>(rhs, ic, {shot.start.w, shot.start.w_r, shot.start.z, shot.start.z_r});

    // The constant solution is reproduced bit-exactly, so it has no horizon.
    // Its variational component still overflows eventually; the window is
    // where the integration got to.
    const auto& traj = shot.profile;
    shot.horizon = shot.constant_branch ? traj.r_max() : reliability_horizon(traj, alpha, cfg);
    shot.window = std::min(cfg.window_end, shot.horizon);

    std::ostringstream diag;
    if (traj.termination == Termination::SignChange && traj.event_r <= shot.window) {
        shot.classification = ShotClass::SignChange;
        shot.sign_change_r = traj.event_r;
        diag << "w changes sign at r = " << traj.event_r;
    } else if (!traj.ok() && traj.termination != Termination::SignChange && traj.final_r < shot.window) {
        shot.classification = ShotClass::Diverged;
        diag << "integration stopped (" << to_string(traj.termination) << ") at r = " << traj.final_r;
    } else {
        shot.classification = ShotClass::PositiveOnWindow;
        shot.window = std::min(shot.window, traj.r_max());
        diag << "positive on [0, " << shot.window << "]";
        if (shot.window < cfg.window_end) diag << " (reliability horizon)";
        if (!shot.constant_branch && shot.window > 2) {
            shot.fit = fit_asymptotics(model, traj, 0.5 * shot.window, shot.window);
        }
    }
    shot.diagnostic = diag.str();
    return shot;
}

ForwardShot shoot_with_variation(const ProfileModel& model, double alpha, const ForwardConfig& cfg) {
    return shoot_from_origin(model, alpha, cfg);
}

std::vector<double> formal_decay_series(const ProfileModel& model, double ell, int terms) {
    if (terms < 1) throw std::invalid_argument("formal series needs at least one term");
    const double p = model.p();
    const double A = model.N() - 1 - 2 * model.decay_exponent();
    std::vector<double> v{ell};
    std::vector<double> P{std::pow(ell, p)};  // coefficients of v^p
    for (int k = 0; k + 1 < terms; ++k) {
        if (k > 0) {
            // Miller's recurrence for the p-th power of a series.
            double s = 0;
            for (int i = 1; i <= k; ++i) s += ((p + 1) * i - k) * v[i] * P[k - i];
            P.push_back(s / (k * v[0]));
        }
        const double g = P[k] - model.L_pm1() * v[k];
        v.push_back((-2.0 * k * (2 * k + 1 - A) * v[k] - g) / (k + 1));
    }
    return v;
}

}  // namespace selfsim
