#include "selfsim/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace selfsim {

ProfileModel::ProfileModel(const ProblemParams& params)
    : N_(params.N()), p_(params.p_value()), pm1_(Rational(params.p() - 1).get_d()) {
    const auto ex = compute_exponents(params);
    kappa_ = ex.kappa;
    s_ = std::pow(kappa_, pm1_);
    if (ex.L_pm1) {
        has_L_ = true;
        L_pm1_ = ex.L_pm1->get_d();
        L_ = *ex.L;
    }
}

double ProfileModel::f(double w) const { return w * (s_ - std::pow(std::abs(w), pm1_)); }

double ProfileModel::f_prime(double w) const { return s_ - p_ * std::pow(std::abs(w), pm1_); }

double ProfileModel::f_second(double w) const {
    const double a = std::abs(w);
    if (a == 0) return 0;
    const double sgn = w > 0 ? 1.0 : -1.0;
    return -p_ * pm1_ * sgn * std::pow(a, pm1_ - 1);
}

double ProfileModel::variational_coefficient(double w) const { return -f_prime(w); }

double ProfileModel::linear_rhs(double r, double z, double zr, double q) const {
    return -((N_ - 1) / r - 0.5 * r) * zr - q * z;
}

void ProfileModel::rhs(double r, const State<2>& y, State<2>& dy) const {
    if (!(r > 0)) throw std::domain_error("profile equation evaluated at r <= 0");
    dy[0] = y[1];
    dy[1] = -((N_ - 1) / r - 0.5 * r) * y[1] + f(y[0]);
}

void ProfileModel::rhs_with_variation(double r, const State<4>& y, State<4>& dy) const {
    if (!(r > 0)) throw std::domain_error("profile equation evaluated at r <= 0");
    const double drift = (N_ - 1) / r - 0.5 * r;
    const double wp = std::pow(std::abs(y[0]), pm1_);
    dy[0] = y[1];
    dy[1] = -drift * y[1] + y[0] * (s_ - wp);
    dy[2] = y[3];
    dy[3] = -drift * y[3] + (s_ - p_ * wp) * y[2];
}

void rhs_with_two_variations(const ProfileModel& model, double r, const State<6>& y, State<6>& dy) {
    State<4> a{y[0], y[1], y[2], y[3]};
    State<4> da;
    model.rhs_with_variation(r, a, da);
    const double q = model.variational_coefficient(y[0]);
    dy[0] = da[0];
    dy[1] = da[1];
    dy[2] = da[2];
    dy[3] = da[3];
    dy[4] = y[5];
    dy[5] = model.linear_rhs(r, y[4], y[5], q);
}

WronskianDrift wronskian_drift(const ProfileModel& model, const State<2>& base, double r_lo, double r_hi,
                               double rel_tol, int samples) {
    if (!(0 < r_lo && r_lo < r_hi)) throw std::invalid_argument("wronskian drift needs 0 < r_lo < r_hi");
    IntegratorConfig ic;
    ic.r_start = r_lo;
    ic.r_end = r_hi;
    ic.rel_tol = rel_tol;
    ic.abs_tol = 1e-300;
    const State<6> y0{base[0], base[1], 1, 0, 0, 1};
    const auto traj = integrate<6>(
        [&](double r, const State<6>& y, State<6>& dy) { rhs_with_two_variations(model, r, y, dy); }, ic, y0);
    WronskianDrift out;
    out.termination = traj.termination;
    if (!traj.ok()) return out;
    const int N = model.N();
    const double w0 = weight(N, r_lo) * wronskian(1, 0, 0, 1);
    for (int i = 0; i <= samples; ++i) {
        const double r = r_lo + (r_hi - r_lo) * i / samples;
        const auto y = traj.at(r);
        const double ow = weight(N, r) * wronskian(y[2], y[3], y[4], y[5]);
        out.max_relative = std::max(out.max_relative, std::abs(ow - w0) / std::abs(w0));
    }
    return out;
}

double ProfileModel::phi_inf(double r) const { return L_ * std::pow(r, -decay_exponent()); }

double ProfileModel::phi_inf_r(double r) const { return -decay_exponent() * phi_inf(r) / r; }

double ProfileModel::phi_inf_rr(double r) const {
    const double m = decay_exponent();
    return m * (m + 1) * phi_inf(r) / (r * r);
}

double ProfileModel::residual(double r, double w, double wr, double wrr) const {
    return wrr + ((N_ - 1) / r - 0.5 * r) * wr - f(w);
}

double weight(int N, double r) { return std::exp(log_weight(N, r)); }

double log_weight(int N, double r) { return (N - 1) * std::log(r) - 0.25 * r * r; }

double wronskian(double psi, double psi_r, double phi, double phi_r) { return psi_r * phi - psi * phi_r; }

}  // namespace selfsim
