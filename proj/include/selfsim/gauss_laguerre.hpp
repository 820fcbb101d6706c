#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace selfsim {

/// Nodes and weights of n-point generalized Gauss-Laguerre quadrature for
/// the weight x^a e^(-x), with weights normalized to sum to one, so that
/// sum w_i f(x_i) approximates (1/Gamma(a+1)) int_0^inf x^a e^(-x) f(x) dx.
///
/// `Real` may be double or a multiprecision type; starting guesses are made
/// in double and polished by Newton iteration on the three-term recurrence in
/// `Real` until the correction falls below `tol`.
template <typename Real>
struct GaussLaguerre {
    std::vector<Real> x;
    std::vector<Real> w;
};

template <typename Real>
GaussLaguerre<Real> gauss_laguerre(int n, const Real& a, const Real& tol, int max_newton = 200) {
    using std::abs;
    if (n < 1) throw std::invalid_argument("Gauss-Laguerre needs at least one node");
    if (!(a > -1)) throw std::invalid_argument("Gauss-Laguerre needs a > -1");
    GaussLaguerre<Real> q;
    q.x.resize(n);
    q.w.resize(n);
    const double ad = static_cast<double>(a);
    Real z = 0;
    Real sum = 0;
    for (int i = 0; i < n; ++i) {
        double zd;
        if (i == 0) {
            zd = (1 + ad) * (3 + 0.92 * ad) / (1 + 2.4 * n + 1.8 * ad);
        } else if (i == 1) {
            zd = static_cast<double>(z) + (15 + 6.25 * ad) / (1 + 0.9 * ad + 2.5 * n);
        } else {
            const double ai = i - 1;
            zd = static_cast<double>(z) + ((1 + 2.55 * ai) / (1.9 * ai) + 1.26 * ai * ad / (1 + 3.5 * ai)) /
                                              (1 + 0.3 * ad) * static_cast<double>(z - q.x[i - 2]);
        }
        z = Real(zd);
        Real p1, p2, pp;
        bool converged = false;
        for (int it = 0; it < max_newton; ++it) {
            p1 = 1;
            p2 = 0;
            for (int j = 1; j <= n; ++j) {
                Real p3 = p2;
                p2 = p1;
                p1 = ((2 * j - 1 + a - z) * p2 - (j - 1 + a) * p3) / j;
            }
            pp = (n * p1 - (n + a) * p2) / z;
            Real z1 = z;
            z = z1 - p1 / pp;
            if (abs(z - z1) <= tol * (1 + abs(z))) {
                converged = true;
                break;
            }
        }
        if (!converged) throw std::runtime_error("Gauss-Laguerre node iteration did not converge");
        // recompute at the converged node
        p1 = 1;
        p2 = 0;
        for (int j = 1; j <= n; ++j) {
            Real p3 = p2;
            p2 = p1;
            p1 = ((2 * j - 1 + a - z) * p2 - (j - 1 + a) * p3) / j;
        }
        pp = (n * p1 - (n + a) * p2) / z;
        q.x[i] = z;
        q.w[i] = -1 / (pp * p2);  // proportional to the true weight
        sum += q.w[i];
    }
    for (auto& wi : q.w) wi /= sum;
    return q;
}

}  // namespace selfsim
