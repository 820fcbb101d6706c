#pragma once

#include "selfsim/profile.hpp"

#include <functional>
#include <optional>
#include <string>

namespace selfsim {

/// Initial data at r_eps from the Taylor expansion of the regular solution
/// w(r) = alpha + a2 r^2 + a4 r^4 + ..., together with the alpha-derivative
/// z = 1 + b2 r^2 + b4 r^4.
struct SeriesStart {
    double r_eps = 0;
    double w = 0;
    double w_r = 0;
    double z = 1;
    double z_r = 0;
    /// Bound on the first omitted term |a6| r_eps^6.
    double truncation_bound = 0;
};

struct SeriesCoefficients {
    double a2 = 0, a4 = 0, a6 = 0;
    double b2 = 0, b4 = 0;
};

SeriesCoefficients series_coefficients(const ProfileModel& model, double alpha);

/// Series start at exactly r_eps; throws std::invalid_argument when the
/// truncation bound exceeds `tolerance`.
SeriesStart series_start(const ProfileModel& model, double alpha, double r_eps, double tolerance);

/// Halves r_eps from `r_eps_max` until the truncation bound is below
/// abs_tol + rel_tol * alpha.
SeriesStart series_start_auto(const ProfileModel& model, double alpha, double r_eps_max, double abs_tol,
                              double rel_tol);

enum class ShotClass { PositiveOnWindow, SignChange, Diverged };

std::string to_string(ShotClass c);

struct ForwardConfig {
    double window_end = 60;
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    double r_eps = 1e-3;
    /// |w| above blowup_factor * max(alpha, kappa) counts as divergence.
    double blowup_factor = 1e3;
    /// Relative size of the numerical error seeded near the origin, amplified
    /// along w_alpha, used for the reliability horizon.
    double seed_error = 1e-10;
    /// Horizon ends where seed_error * alpha * max|w_alpha| exceeds
    /// horizon_tol * |w|.
    double horizon_tol = 1e-5;
};

/// Least-squares fit v(r) = w r^(2/(p-1)) ~ ell (1 - c r^-2 + d r^-4).
struct AsymptoticFit {
    double ell = 0;
    double c = 0;
    double d = 0;
    double r_lo = 0;
    double r_hi = 0;
    /// Max relative deviation of the model over the fit interval.
    double residual = 0;
};

AsymptoticFit fit_asymptotics(const ProfileModel& model, const Trajectory<4>& traj, double r_lo, double r_hi,
                              int samples = 64);
AsymptoticFit fit_asymptotics(const ProfileModel& model, const std::function<double(double)>& w, double r_lo,
                              double r_hi, int samples = 64);

/// Power-law fit g ~ A r^k of g = w_r/w + (2/(p-1))/r over [r_lo, r_hi];
/// the sign of A is that of g at r_hi.
struct LogDerivativeFit {
    double exponent = 0;
    double amplitude = 0;
    double r_lo = 0;
    double r_hi = 0;
};

LogDerivativeFit fit_log_derivative_correction(const ProfileModel& model,
                                               const std::function<std::pair<double, double>(double)>& w_and_wr,
                                               double r_lo, double r_hi, int samples = 64);

struct ForwardShot {
    double alpha = 0;
    ShotClass classification = ShotClass::Diverged;
    /// Radius of the first zero of w when classification is SignChange.
    double sign_change_r = 0;
    /// Co-integrated (w, w_r, w_alpha, w_alpha_r) from r_eps onward.
    Trajectory<4> profile;
    SeriesStart start;
    /// Radius beyond which forward values are dominated by amplified error.
    double horizon = 0;
    /// End of the classified window: min(window_end, horizon).
    double window = 0;
    /// alpha == kappa: the constant solution, not fitted.
    bool constant_branch = false;
    std::optional<AsymptoticFit> fit;
    std::string diagnostic;

    /// (w, w_r, w_alpha, w_alpha_r) at r, using the series below r_eps.
    State<4> at(const ProfileModel& model, double r) const;
};

ForwardShot shoot_from_origin(const ProfileModel& model, double alpha, const ForwardConfig& cfg = {});
/// Same integration; kept as a separate entry point for callers that need
/// the variational trace explicitly.
ForwardShot shoot_with_variation(const ProfileModel& model, double alpha, const ForwardConfig& cfg = {});

/// Integrates from the origin to `r_end` without classification or horizon,
/// stopping only on a sign change or divergence.
Trajectory<4> integrate_from_origin(const ProfileModel& model, double alpha, double r_end, double rel_tol,
                                    double abs_tol, double r_eps = 1e-3);

/// Coefficients v_k of the formal expansion v = sum v_k r^(-2k), v_0 = ell.
std::vector<double> formal_decay_series(const ProfileModel& model, double ell, int terms);

}  // namespace selfsim
