#pragma once

// Adaptive Dormand-Prince 5(4) integrator with Hairer's continuous extension.
//
// Integration runs over [r_start, r_end] in either direction. Every accepted
// step keeps its dense-output coefficients, so a Trajectory can be evaluated
// anywhere inside the integrated range.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace selfsim {

template <std::size_t Dim>
using State = std::array<double, Dim>;

enum class Direction { Forward, Backward };

struct IntegratorConfig {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0;  // 0: pick automatically
    double r_start = 0;
    double r_end = 1;
    Direction direction = Direction::Forward;
    bool dense_output = true;
    /// Stop at the first sign change of component 0, polished to root_tol.
    bool stop_on_sign_change = false;
    /// Stop once |component 0| exceeds this value.
    double blowup_threshold = std::numeric_limits<double>::infinity();
    /// Stop once any component exceeds this magnitude (keeps linearized
    /// components with exponential growth from overflowing).
    double component_cap = 1e250;
    double root_tol = 1e-12;
    std::size_t max_steps = 5'000'000;

    void validate() const {
        if (!(rel_tol > 0) || !(abs_tol > 0)) throw std::invalid_argument("tolerances must be > 0");
        if (!(r_start < r_end)) throw std::invalid_argument("integration interval needs r_start < r_end");
        if (!(max_step > 0)) throw std::invalid_argument("max_step must be > 0");
    }
};

enum class Termination { Completed, SignChange, BlowUp, StepUnderflow, NonFinite, MaxSteps };

inline std::string to_string(Termination t) {
    switch (t) {
        case Termination::Completed: return "completed";
        case Termination::SignChange: return "sign-change";
        case Termination::BlowUp: return "blow-up";
        case Termination::StepUnderflow: return "step-underflow";
        case Termination::NonFinite: return "non-finite";
        case Termination::MaxSteps: return "max-steps";
    }
    return "unknown";
}

template <std::size_t Dim>
class Trajectory {
public:
    struct Step {
        double r0 = 0;
        double h = 0;  // signed
        std::array<State<Dim>, 5> coeff{};

        double r1() const { return r0 + h; }
        State<Dim> at(double r) const {
            const double theta = (r - r0) / h;
            const double theta1 = 1.0 - theta;
            State<Dim> y;
            for (std::size_t i = 0; i < Dim; ++i) {
                y[i] = coeff[0][i] +
                       theta * (coeff[1][i] +
                                theta1 * (coeff[2][i] + theta * (coeff[3][i] + theta1 * coeff[4][i])));
            }
            return y;
        }
    };

    Termination termination = Termination::Completed;
    /// Radius of the polished event (sign change) or of the last accepted state.
    double event_r = 0;
    double initial_r = 0;
    State<Dim> initial_state{};
    double final_r = 0;
    State<Dim> final_state{};
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;

    bool ok() const { return termination == Termination::Completed; }
    bool forward() const { return direction_ == Direction::Forward; }

    double r_min() const { return std::min(initial_r, final_r); }
    double r_max() const { return std::max(initial_r, final_r); }
    bool covers(double r) const { return r >= r_min() && r <= r_max(); }

    const std::vector<Step>& steps() const { return steps_; }

    /// Dense evaluation anywhere inside [r_min(), r_max()].
    State<Dim> at(double r) const {
        if (!covers(r)) throw std::out_of_range("trajectory evaluated outside its range");
        if (steps_.empty()) return initial_state;
        // Steps are stored in integration order; locate by the step interval.
        std::size_t lo = 0, hi = steps_.size();
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            const bool past = forward() ? (r >= steps_[mid].r0) : (r <= steps_[mid].r0);
            if (past) lo = mid; else hi = mid;
        }
        return steps_[lo].at(r);
    }

    /// Accepted step endpoints in ascending r, including the initial point.
    std::vector<std::pair<double, State<Dim>>> nodes() const {
        std::vector<std::pair<double, State<Dim>>> out;
        out.reserve(steps_.size() + 1);
        out.emplace_back(initial_r, initial_state);
        for (const auto& s : steps_) out.emplace_back(s.r1(), s.at(s.r1()));
        if (!forward()) std::reverse(out.begin(), out.end());
        return out;
    }

    void set_direction(Direction d) { direction_ = d; }
    void push(Step s) { steps_.push_back(std::move(s)); }
    Step& back() { return steps_.back(); }

private:
    Direction direction_ = Direction::Forward;
    std::vector<Step> steps_;
};

namespace detail {

struct DP5 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                            a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
};

template <std::size_t Dim>
bool all_finite(const State<Dim>& y) {
    return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace detail

/// Integrates y' = rhs(r, y) from the start of the configured interval
/// (r_start for Forward, r_end for Backward) toward the other end.
///
/// `Rhs` is any callable `void(double r, const State<Dim>& y, State<Dim>& dy)`.
template <std::size_t Dim, typename Rhs>
Trajectory<Dim> integrate(Rhs&& rhs, const IntegratorConfig& cfg, const State<Dim>& y0) {
    using detail::DP5;
    cfg.validate();
    const bool fwd = cfg.direction == Direction::Forward;
    const double sgn = fwd ? 1.0 : -1.0;
    const double r_begin = fwd ? cfg.r_start : cfg.r_end;
    const double r_stop = fwd ? cfg.r_end : cfg.r_start;

    Trajectory<Dim> traj;
    traj.set_direction(cfg.direction);
    traj.initial_r = r_begin;
    traj.initial_state = y0;
    traj.final_r = r_begin;
    traj.final_state = y0;
    traj.event_r = r_begin;
    if (!detail::all_finite(y0)) {
        traj.termination = Termination::NonFinite;
        return traj;
    }

    auto scale = [&](const State<Dim>& a, const State<Dim>& b, std::size_t i) {
        return cfg.abs_tol + cfg.rel_tol * std::max(std::abs(a[i]), std::abs(b[i]));
    };

    double r = r_begin;
    State<Dim> y = y0;
    State<Dim> k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
    rhs(r, y, k1);

    double h = cfg.initial_step;
    const double span = std::abs(r_stop - r_begin);
    if (h <= 0) {
        // Hairer's starting step heuristic.
        double d0 = 0, d1 = 0;
        for (std::size_t i = 0; i < Dim; ++i) {
            const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
            d0 += (y[i] / sc) * (y[i] / sc);
            d1 += (k1[i] / sc) * (k1[i] / sc);
        }
        d0 = std::sqrt(d0 / Dim);
        d1 = std::sqrt(d1 / Dim);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min({h0, span, cfg.max_step});
        for (std::size_t i = 0; i < Dim; ++i) ytmp[i] = y[i] + sgn * h0 * k1[i];
        rhs(r + sgn * h0, ytmp, k2);
        double d2 = 0;
        for (std::size_t i = 0; i < Dim; ++i) {
            const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
            d2 += ((k2[i] - k1[i]) / sc) * ((k2[i] - k1[i]) / sc);
        }
        d2 = std::sqrt(d2 / Dim) / h0;
        const double dm = std::max(d1, d2);
        const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
        h = std::min({100 * h0, h1, span, cfg.max_step});
        // A component starting at 0 with a tiny abs_tol makes the estimate
        // collapse; step rejection handles a too-large start.
        h = std::max(h, std::min(1e-8 * span, cfg.max_step));
    }
    h = std::min(h, cfg.max_step);

    const double eps = std::numeric_limits<double>::epsilon();
    double err_old = 1e-4;
    bool last_rejected = false;

    while (true) {
        const double remaining = sgn * (r_stop - r);
        if (remaining <= 0) break;
        if (traj.accepted_steps + traj.rejected_steps >= cfg.max_steps) {
            traj.termination = Termination::MaxSteps;
            break;
        }
        bool final_step = false;
        if (h >= remaining) {
            h = remaining;
            final_step = true;
        }
        if (h < 16 * eps * std::abs(r) || h < std::numeric_limits<double>::min()) {
            traj.termination = Termination::StepUnderflow;
            break;
        }
        const double hs = sgn * h;

        for (std::size_t i = 0; i < Dim; ++i) ytmp[i] = y[i] + hs * DP5::a21 * k1[i];
        rhs(r + DP5::c2 * hs, ytmp, k2);
        for (std::size_t i = 0; i < Dim; ++i) ytmp[i] = y[i] + hs * (DP5::a31 * k1[i] + DP5::a32 * k2[i]);
        rhs(r + DP5::c3 * hs, ytmp, k3);
        for (std::size_t i = 0; i < Dim; ++i)
            ytmp[i] = y[i] + hs * (DP5::a41 * k1[i] + DP5::a42 * k2[i] + DP5::a43 * k3[i]);
        rhs(r + DP5::c4 * hs, ytmp, k4);
        for (std::size_t i = 0; i < Dim; ++i)
            ytmp[i] = y[i] + hs * (DP5::a51 * k1[i] + DP5::a52 * k2[i] + DP5::a53 * k3[i] + DP5::a54 * k4[i]);
        rhs(r + DP5::c5 * hs, ytmp, k5);
        for (std::size_t i = 0; i < Dim; ++i)
            ytmp[i] = y[i] + hs * (DP5::a61 * k1[i] + DP5::a62 * k2[i] + DP5::a63 * k3[i] +
                                   DP5::a64 * k4[i] + DP5::a65 * k5[i]);
        const double r_new = final_step ? r_stop : r + hs;
        rhs(r + hs, ytmp, k6);
        for (std::size_t i = 0; i < Dim; ++i)
            ynew[i] = y[i] + hs * (DP5::a71 * k1[i] + DP5::a73 * k3[i] + DP5::a74 * k4[i] +
                                   DP5::a75 * k5[i] + DP5::a76 * k6[i]);
        rhs(r_new, ynew, k7);

        double err = 0;
        for (std::size_t i = 0; i < Dim; ++i) {
            const double e = hs * (DP5::e1 * k1[i] + DP5::e3 * k3[i] + DP5::e4 * k4[i] +
                                   DP5::e5 * k5[i] + DP5::e6 * k6[i] + DP5::e7 * k7[i]);
            const double sc = scale(y, ynew, i);
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / Dim);

        if (!std::isfinite(err) || !detail::all_finite(ynew)) {
            // Treat as a rejected step; shrink hard.
            ++traj.rejected_steps;
            h *= 0.1;
            last_rejected = true;
            continue;
        }

        if (err <= 1.0) {
            typename Trajectory<Dim>::Step step;
            step.r0 = r;
            step.h = r_new - r;
            if (cfg.dense_output) {
                for (std::size_t i = 0; i < Dim; ++i) {
                    const double ydiff = ynew[i] - y[i];
                    const double bspl = hs * k1[i] - ydiff;
                    step.coeff[0][i] = y[i];
                    step.coeff[1][i] = ydiff;
                    step.coeff[2][i] = bspl;
                    step.coeff[3][i] = ydiff - hs * k7[i] - bspl;
                    step.coeff[4][i] = hs * (DP5::d1 * k1[i] + DP5::d3 * k3[i] + DP5::d4 * k4[i] +
                                             DP5::d5 * k5[i] + DP5::d6 * k6[i] + DP5::d7 * k7[i]);
                }
            } else {
                // Linear interpolation only.
                for (std::size_t i = 0; i < Dim; ++i) {
                    step.coeff[0][i] = y[i];
                    step.coeff[1][i] = ynew[i] - y[i];
                }
            }
            ++traj.accepted_steps;

            const bool sign_change = cfg.stop_on_sign_change &&
                                     ((y[0] > 0 && ynew[0] <= 0) || (y[0] < 0 && ynew[0] >= 0));
            if (sign_change) {
                // Bisection on the dense interpolant.
                double a = r, b = r_new;
                const double fa = y[0];
                while (std::abs(b - a) > cfg.root_tol) {
                    const double m = 0.5 * (a + b);
                    const double fm = step.at(m)[0];
                    if ((fm > 0) == (fa > 0) && fm != 0) a = m; else b = m;
                }
                const double rz = 0.5 * (a + b);
                // The step keeps its full interpolant; the trajectory range
                // ends at rz through final_r.
                traj.push(step);
                traj.final_r = rz;
                traj.final_state = step.at(rz);
                traj.event_r = rz;
                traj.termination = Termination::SignChange;
                return traj;
            }

            traj.push(step);
            r = r_new;
            y = ynew;
            k1 = k7;
            traj.final_r = r;
            traj.final_state = y;
            traj.event_r = r;

            if (std::abs(y[0]) > cfg.blowup_threshold ||
                std::any_of(y.begin(), y.end(), [&](double v) { return std::abs(v) > cfg.component_cap; })) {
                traj.termination = Termination::BlowUp;
                return traj;
            }
            if (final_step) break;

            // PI step-size control.
            const double beta = 0.04;
            double fac = std::pow(err, 0.2 - 0.75 * beta) * std::pow(err_old, -beta) / 0.9;
            fac = std::clamp(fac, 0.1, 5.0);
            double hnew = h / fac;
            if (last_rejected) hnew = std::min(hnew, h);
            err_old = std::max(err, 1e-4);
            h = std::min(hnew, cfg.max_step);
            last_rejected = false;
        } else {
            ++traj.rejected_steps;
            const double fac = std::min(10.0, std::pow(err, 0.2) / 0.9);
            h /= fac;
            last_rejected = true;
        }
    }
    traj.final_r = r;
    traj.final_state = y;
    traj.event_r = r;
    return traj;
}

}  // namespace selfsim
