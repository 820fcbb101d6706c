#include "selfsim/chebyshev.hpp"

#include <cmath>
#include <stdexcept>

namespace selfsim {

Chebyshev::Chebyshev(double lo, double hi, std::vector<double> coeffs) : lo_(lo), hi_(hi), a_(std::move(coeffs)) {
    if (!(lo < hi)) throw std::invalid_argument("Chebyshev interval must satisfy lo < hi");
    if (a_.empty()) a_.push_back(0);
}

std::vector<double> Chebyshev::nodes(double lo, double hi, int n) {
    std::vector<double> x(n + 1);
    for (int j = 0; j <= n; ++j) {
        // increasing order: x_j = -cos(pi j / n)
        const double t = -std::cos(M_PI * j / n);
        x[j] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t;
    }
    x.front() = lo;
    x.back() = hi;
    return x;
}

Chebyshev Chebyshev::from_values(double lo, double hi, const std::vector<double>& values) {
    const int n = static_cast<int>(values.size()) - 1;
    if (n < 1) throw std::invalid_argument("Chebyshev interpolation needs at least two values");
    // values are at t_j = -cos(pi j/n) = cos(pi (n-j)/n)
    std::vector<double> a(n + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        double s = 0;
        for (int j = 0; j <= n; ++j) {
            const int i = n - j;  // index in cos(pi i / n) ordering
            double term = values[j] * std::cos(M_PI * double(i) * k / n);
            if (i == 0 || i == n) term *= 0.5;
            s += term;
        }
        a[k] = 2.0 * s / n;
    }
    a[0] *= 0.5;
    a[n] *= 0.5;
    return Chebyshev(lo, hi, std::move(a));
}

Chebyshev Chebyshev::from_function(double lo, double hi, int n, const std::function<double(double)>& f) {
    const auto x = nodes(lo, hi, n);
    std::vector<double> v(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) v[i] = f(x[i]);
    return from_values(lo, hi, v);
}

double Chebyshev::operator()(double x) const {
    const double t = (2 * x - lo_ - hi_) / (hi_ - lo_);
    double b1 = 0, b2 = 0;
    for (std::size_t k = a_.size(); k-- > 1;) {
        const double b0 = 2 * t * b1 - b2 + a_[k];
        b2 = b1;
        b1 = b0;
    }
    return t * b1 - b2 + a_[0];
}

Chebyshev Chebyshev::derivative() const {
    const std::size_t n = a_.size() - 1;
    if (n == 0) return Chebyshev(lo_, hi_, {0.0});
    std::vector<double> d(n, 0.0);  // degree n-1
    // c_{k-1} = c_{k+1} + 2 k a_k
    std::vector<double> c(n + 2, 0.0);
    for (std::size_t k = n; k >= 1; --k) c[k - 1] = c[k + 1] + 2.0 * k * a_[k];
    for (std::size_t k = 0; k < n; ++k) d[k] = c[k];
    d[0] *= 0.5;
    const double scale = 2.0 / (hi_ - lo_);
    for (double& v : d) v *= scale;
    return Chebyshev(lo_, hi_, std::move(d));
}

Chebyshev Chebyshev::antiderivative() const {
    const std::size_t n = a_.size() - 1;
    std::vector<double> b(n + 2, 0.0);
    auto coef = [&](std::size_t k) { return k <= n ? a_[k] : 0.0; };
    // int T_0 = T_1; int T_1 = T_2 / 4; int T_k = T_{k+1}/(2(k+1)) - T_{k-1}/(2(k-1))
    b[1] += coef(0);
    if (n >= 1) b[2] += coef(1) / 4.0;
    for (std::size_t k = 2; k <= n; ++k) {
        b[k + 1] += coef(k) / (2.0 * (k + 1));
        b[k - 1] -= coef(k) / (2.0 * (k - 1));
    }
    const double scale = 0.5 * (hi_ - lo_);
    for (double& v : b) v *= scale;
    Chebyshev F(lo_, hi_, b);
    b[0] -= F(lo_);
    return Chebyshev(lo_, hi_, std::move(b));
}

}  // namespace selfsim
