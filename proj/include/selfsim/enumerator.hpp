#pragma once

#include "selfsim/backward_shoot.hpp"
#include "selfsim/forward_shoot.hpp"

#include <optional>
#include <string>
#include <vector>

namespace selfsim {

/// A point (w(r0), w_r(r0)) of a phase-plane curve together with the
/// parameter derivative of both components.
struct MatchPoint {
    /// alpha for F, ell for G.
    double param = 0;
    double zeta = 0;
    double slope = 0;
    /// w_alpha(r0) or u_ell(r0).
    double dzeta = 0;
    /// w_alpha_r(r0) or u_ell_r(r0).
    double dslope = 0;
};

enum class CurveKind { F, G };

/// A maximal run of grid points along which zeta is strictly monotone.
struct CurveBranch {
    std::vector<MatchPoint> points;

    double zeta_min() const;
    double zeta_max() const;
    bool contains(double zeta) const { return zeta >= zeta_min() && zeta <= zeta_max(); }
    /// Parameter and slope at zeta by linear interpolation.
    MatchPoint interpolate(double zeta) const;
};

struct CurveTable {
    CurveKind kind = CurveKind::F;
    double r0 = 0;
    /// Successful grid points in parameter order.
    std::vector<MatchPoint> points;
    /// Points split at sign changes of the parameter derivative of zeta,
    /// at failed grid points, and wherever zeta is not monotone.
    std::vector<CurveBranch> branches;
    /// Grid parameters whose shot did not reach r0 positively, with reasons.
    std::vector<std::pair<double, std::string>> failures;
};

/// alpha = kappa * 2^(k / per_octave), k = 0, 1, ..., up to alpha_max.
std::vector<double> geometric_alpha_grid(double kappa, double alpha_max, int per_octave);

CurveTable build_F(const ProfileModel& model, const std::vector<double>& alpha_grid, double r0,
                   const ForwardConfig& cfg = {}, int threads = 1);

/// Backward shots at each ell; sign changes of u_ell(r0) between neighbours
/// are located by bisection and inserted so that branches meet at the fold,
/// and the lower end of the positive range is refined the same way.
CurveTable build_G(const ProfileModel& model, const std::vector<double>& ell_grid, double r0,
                   const BackwardConfig& cfg = {}, int threads = 1);

struct SearchConfig {
    /// Matching radius; chosen from r0_candidates when absent.
    std::optional<double> r0;
    std::vector<double> r0_candidates{1.0, 1.25, 1.5, 1.75, 2.0};
    double alpha_max = 1e6;
    int alpha_per_octave = 4;
    /// ell grid: ell_points equispaced values in (0, ell_max_factor * L].
    int ell_points = 60;
    double ell_max_factor = 4;
    /// Polishing stops when both |w - u| and |w_r - u_r| at r0 are below this.
    double polish_tol = 1e-10;
    int max_polish_iters = 60;
    /// Sign changes of F - G whose endpoint values are both below this
    /// (times max(1, |slope|)) are indistinguishable from rounding and are
    /// reported as unresolved rather than polished.
    double mismatch_floor = 1e-10;
    /// Two-sided check: max over [r0/2, 2 r0] of |w - u| <= tol * max|w|.
    double two_sided_tol = 1e-6;
    /// |ell_fit - ell| / ell for the forward asymptotic fit.
    double ell_roundtrip_tol = 1e-3;
    /// The round trip is checked only when the forward fit deviates from its
    /// model by at most this much; otherwise ell_fit is reported as NaN.
    double fit_residual_max = 1e-3;
    int threads = 1;
    ForwardConfig forward;
    BackwardConfig backward;
};

struct SolutionRecord {
    double alpha = 0;
    /// NaN for the constant solution kappa.
    double ell = 0;
    double zeta = 0;
    double slope = 0;
    /// max(|w - u|, |w_r - u_r|) at r0.
    double residual = 0;
    /// Resolution of alpha implied by the polishing tolerance in zeta.
    double alpha_tolerance = 0;
    bool constant = false;
    /// Max relative two-sided deviation over [r0/2, 2 r0].
    double two_sided_error = 0;
    /// ell from the forward asymptotic fit; NaN when the forward shot does
    /// not reach the asymptotic regime within its reliability horizon.
    double ell_fit = 0;
    double ell_roundtrip_error = 0;
    std::string note;
    ForwardShot forward;
    std::optional<BackwardShot> backward;
};

/// A stretch of alpha where the search could not decide.
struct UnresolvedWindow {
    double alpha_lo = 0;
    double alpha_hi = 0;
    std::string reason;
};

struct EnumerationResult {
    double r0 = 0;
    /// Score of each r0 candidate (empty when r0 was given).
    std::vector<std::pair<double, double>> r0_scores;
    std::vector<SolutionRecord> records;
    std::vector<UnresolvedWindow> unresolved;
    CurveTable F;
    CurveTable G;
    std::vector<double> alpha_grid;
    std::vector<double> ell_grid;
};

/// Verified records (kappa always first) plus unresolved windows. For
/// p <= p_S only the kappa record is returned.
EnumerationResult enumerate_solutions(const ProblemParams& params, const SearchConfig& cfg = {});

/// Large-r behaviour of a matched solution, read from the composite profile:
/// the forward shot on [0, r0] and the backward shot beyond.
struct RecordAsymptotics {
    /// Fits of w r^(2/(p-1)) ~ ell (1 - c r^-2 + d r^-4) on [r_hi/4, r_hi/2]
    /// and [r_hi/2, r_hi].
    AsymptoticFit inner;
    AsymptoticFit outer;
    /// |outer.ell - inner.ell| / outer.ell.
    double ell_window_change = 0;
    /// ell^(p-1) - L^(p-1) from the outer fit.
    double c_predicted = 0;
    /// |outer.c - c_predicted| / max(1, |outer.c|).
    double c_error = 0;
    LogDerivativeFit log_derivative;
};

/// Needs a nonconstant record with a backward shot.
RecordAsymptotics record_asymptotics(const ProfileModel& model, const SolutionRecord& record, double r0,
                                     double r_hi = 40);

/// Solves (w, w_r)(r0, alpha) = (u, u_r)(r0, ell) by Newton's method from
/// (alpha, ell); nullopt when the iteration does not converge.
struct MatchSolution {
    double alpha = 0;
    double ell = 0;
    double zeta = 0;
    double slope = 0;
    double residual = 0;
    int iterations = 0;
    /// polish_tol / |w_alpha(r0)|: the alpha change that moves zeta by the
    /// polishing tolerance.
    double alpha_tolerance = 0;
};
std::optional<MatchSolution> polish_match(const ProfileModel& model, double r0, double alpha, double ell,
                                          const SearchConfig& cfg);

/// F'(zeta) = w_alpha_r(r0) / w_alpha(r0). Throws std::domain_error when
/// w_alpha(r0) vanishes (a branch point of the zeta parameterization).
double curve_derivative_F1(const ProfileModel& model, double alpha, double r0, const ForwardConfig& cfg = {});

struct SecondDerivative {
    double value = 0;
    /// Quadrature error estimate.
    double error = 0;
    double w_alpha_r0 = 0;
};

/// F''(zeta) = -p(p-1)/omega(r0) int_0^r0 omega(s) w^(p-2) psi^3 ds with
/// psi = w_alpha / w_alpha(r0).
SecondDerivative curve_derivative_F2(const ProfileModel& model, double alpha, double r0,
                                     const ForwardConfig& cfg = {});

}  // namespace selfsim
