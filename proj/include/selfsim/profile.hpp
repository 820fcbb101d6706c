#pragma once

#include "selfsim/exponents.hpp"
#include "selfsim/ode.hpp"

namespace selfsim {

/// Right-hand sides of the profile equation
///   w'' + ((N-1)/r - r/2) w' - w/(p-1) + w|w|^(p-1) = 0
/// and of its linearizations.
///
/// The zero-order term is evaluated as w (s - |w|^(p-1)) with
/// s = kappa^(p-1) computed from the stored double kappa, so that the
/// floating-point constant kappa is an exact equilibrium.
class ProfileModel {
public:
    explicit ProfileModel(const ProblemParams& params);

    int N() const { return N_; }
    double p() const { return p_; }
    double pm1() const { return pm1_; }
    double kappa() const { return kappa_; }
    bool has_singular() const { return has_L_; }
    double L() const { return L_; }
    /// L^(p-1), rounded from the exact rational value.
    double L_pm1() const { return L_pm1_; }
    /// 2/(p-1)
    double decay_exponent() const { return 2.0 / pm1_; }

    /// w/(p-1) - w|w|^(p-1).
    double f(double w) const;
    /// d f / d w.
    double f_prime(double w) const;
    /// d^2 f / d w^2.
    double f_second(double w) const;

    /// (w, w_r) -> (w_r, w_rr). Throws std::domain_error for r <= 0.
    void rhs(double r, const State<2>& y, State<2>& dy) const;
    /// (w, w_r, z, z_r) with z solving the linearization around w.
    void rhs_with_variation(double r, const State<4>& y, State<4>& dy) const;

    /// Zero-order coefficient -1/(p-1) + p|w|^(p-1) of the linearization.
    double variational_coefficient(double w) const;

    /// w_rr for a linear equation z'' + ((N-1)/r - r/2) z' + q z = 0.
    double linear_rhs(double r, double z, double zr, double q) const;

    /// Singular solution L r^(-2/(p-1)) and its derivatives.
    double phi_inf(double r) const;
    double phi_inf_r(double r) const;
    double phi_inf_rr(double r) const;

    /// Residual w'' + ((N-1)/r - r/2) w' - f(w).
    double residual(double r, double w, double wr, double wrr) const;

private:
    int N_;
    double p_;
    double pm1_;
    double kappa_;
    double s_;
    bool has_L_ = false;
    double L_ = 0;
    double L_pm1_ = 0;
};

/// omega(r) = r^(N-1) exp(-r^2/4).
double weight(int N, double r);
double log_weight(int N, double r);

/// psi' phi - psi phi'.
double wronskian(double psi, double psi_r, double phi, double phi_r);

/// A pair of solutions of one linear equation z'' + a(r) z' + q(r) z = 0
/// integrated together with the base profile; state (w, w_r, z1, z1_r, z2, z2_r).
void rhs_with_two_variations(const ProfileModel& model, double r, const State<6>& y, State<6>& dy);

struct WronskianDrift {
    /// max over the samples of |omega W - omega W(r_lo)| / |omega W(r_lo)|.
    double max_relative = 0;
    Termination termination = Termination::Completed;
};

/// Co-integrates the base profile from (w, w_r) at r_lo with the linearized
/// pair started from (1, 0) and (0, 1), and samples omega W on [r_lo, r_hi].
WronskianDrift wronskian_drift(const ProfileModel& model, const State<2>& base, double r_lo, double r_hi,
                               double rel_tol = 1e-13, int samples = 400);

}  // namespace selfsim
