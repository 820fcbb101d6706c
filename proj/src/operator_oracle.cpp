#include "selfsim/operator_oracle.hpp"

#include "selfsim/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace selfsim {

namespace {

std::vector<double> solve(int N, double V, double inv_pm1, double beta, double s0, double s1, int intervals,
                          int count) {
    const double h = (s1 - s0) / intervals;
    const int n = intervals;  // free nodes s_0 .. s_{n-1}; s_n carries the Dirichlet condition
    auto log_mu = [&](double s) { return (N - 2) * s - 0.25 * std::exp(2 * s); };
    Eigen::VectorXd diag(n), sub(n - 1);
    for (int i = 0; i < n; ++i) {
        const double s = s0 + i * h;
        const double lm = log_mu(s);
        const double w = i == 0 ? 0.5 * h : h;
        // Everything is divided by the lumped mass w mu e^(2s).
        const double scale = 1 / (w * std::exp(2 * s));
        double k = std::exp(log_mu(s + 0.5 * h) - lm) / h;
        if (i > 0) k += std::exp(log_mu(s - 0.5 * h) - lm) / h;
        if (i == 0) k += beta;
        diag[i] = scale * k + (std::exp(2 * s) * inv_pm1 - V) * std::exp(-2 * s);
        if (i + 1 < n) {
            const double s2 = s + h;
            const double w2 = h;
            sub[i] = -std::exp(log_mu(s + 0.5 * h) - 0.5 * (lm + log_mu(s2))) / h /
                     (std::sqrt(w * w2) * std::exp(s + s2));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("tridiagonal eigensolver failed");
    std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + count);
    return out;
}

}  // namespace

std::vector<double> discretized_eigenvalues(const ProblemParams& params, int count, const OperatorOracleConfig& cfg) {
    if (count < 1) throw std::invalid_argument("need at least one eigenvalue");
    if (!(0 < cfg.r_min && cfg.r_min < 1 && cfg.r_max > 2)) throw std::invalid_argument("need 0 < r_min < 1 < 2 < r_max");
    if (cfg.intervals < 4 * count) throw std::invalid_argument("too few intervals for the requested eigenvalues");
    const auto spec = compute_spectrum(params, 0);
    const double V = spec.V.get_d();
    const double inv_pm1 = 1 / Rational(spec.p - 1).get_d();
    const double beta = spec.beta.to_double();
    const double s0 = std::log(cfg.r_min), s1 = std::log(cfg.r_max);
    auto coarse = solve(params.N(), V, inv_pm1, beta, s0, s1, cfg.intervals, count);
    if (!cfg.richardson) return coarse;
    auto fine = solve(params.N(), V, inv_pm1, beta, s0, s1, 2 * cfg.intervals, count);
    for (int k = 0; k < count; ++k) fine[k] += (fine[k] - coarse[k]) / 3;
    return fine;
}

}  // namespace selfsim
