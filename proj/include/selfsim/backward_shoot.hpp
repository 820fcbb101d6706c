#pragma once

#include "selfsim/chebyshev.hpp"
#include "selfsim/profile.hpp"

#include <string>
#include <vector>

namespace selfsim {

/// H(rho) = rho^gamma exp(-rho^-2 / 4), H(0) = 0.
double weight_H(double rho, double gamma);

/// gamma = 3 - N + 4/(p-1), the constant of the rho = 1/r transform.
double transform_gamma(const ProfileModel& model);

/// (y, y_rho) at rho <-> (w, w_r) at r = 1/rho, with y = w r^(2/(p-1)).
State<2> y_to_w(const ProfileModel& model, double rho, const State<2>& y);
State<2> w_to_y(const ProfileModel& model, double r, const State<2>& w);

struct PicardConfig {
    double delta = 0.05;
    /// Radius of the ball around (ell, 0); 0 selects ell/4.
    double epsilon_ball = 0;
    int max_iters = 200;
    double stage_tol = 1e-13;
    /// Smallest delta tried before giving up.
    double delta_floor = 1e-3;
    int cheb_degree = 40;
    int laguerre_nodes = 40;
    /// Largest accepted ratio of successive iterate distances.
    double contraction_ratio = 0.9;
    /// Do not halve delta; fail instead when the map does not contract.
    bool fixed_delta = false;
};

/// Converged fixed point (y, z = y') of the map on [0, delta].
struct PicardStage {
    double ell = 0;
    double delta = 0;
    Chebyshev y;
    Chebyshev z;
    int iterations = 0;
    int halvings = 0;
    /// Sup-norm distances between successive iterates.
    std::vector<double> distances;
    /// Sup over the nodes of |U - Psi(U)| for the returned iterate.
    double fixed_point_residual = 0;
};

/// Iterates the integrated form of the transformed equation from (ell, 0).
/// Throws std::runtime_error when the map fails to contract for every delta
/// down to the floor.
PicardStage picard_start(const ProfileModel& model, double ell, const PicardConfig& cfg = {});

/// Residual of y'' + (gamma/rho + 1/(2 rho^3)) y' + rho^-2 (y^p - L^(p-1) y)
/// at rho, divided by the largest of its terms.
double picard_relative_residual(const ProfileModel& model, const PicardStage& stage, double rho);

struct BackwardConfig {
    PicardConfig picard;
    double rel_tol = 1e-12;
    double abs_tol = 1e-15;
    /// Relative step for the finite-difference ell-derivative of the
    /// fixed-point stage.
    double fd_rel_step = 1e-5;
    double blowup_factor = 1e3;
};

struct BackwardShot {
    double ell = 0;
    double gamma = 0;
    PicardStage stage;
    /// d/d ell of the stage (central differences).
    Chebyshev y_ell;
    Chebyshev z_ell;
    double r_handoff = 0;
    /// (w, w_r, u_ell, u_ell_r) at r_handoff.
    State<4> handoff{};
    /// Inward integration from r_handoff down to r_min.
    Trajectory<4> profile;
    bool positive = true;
    double sign_change_r = 0;
    std::string diagnostic;

    bool ok() const { return profile.termination == Termination::Completed; }
    double r_min() const { return profile.r_min(); }
    /// (w, w_r, u_ell, u_ell_r) at any r >= r_min, using the fixed-point
    /// stage beyond r_handoff.
    State<4> at(const ProfileModel& model, double r) const;
};

/// Fixed-point stage, hand-off at r = 1/delta, inward integration of the
/// profile equation and its linearization down to r_min.
BackwardShot shoot_from_infinity(const ProfileModel& model, double ell, double r_min,
                                 const BackwardConfig& cfg = {});

/// Same shot; the u_ell trace is in components 2 and 3 of the profile.
BackwardShot sensitivity_u_ell(const ProfileModel& model, double ell, double r_min,
                               const BackwardConfig& cfg = {});

}  // namespace selfsim
