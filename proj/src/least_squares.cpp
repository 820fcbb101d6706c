#include "selfsim/least_squares.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace selfsim {

std::vector<double> least_squares(const std::vector<std::vector<double>>& columns, const std::vector<double>& y) {
    const std::size_t n = columns.size();
    const std::size_t m = y.size();
    if (n == 0 || m < n) throw std::invalid_argument("least squares needs at least as many rows as unknowns");
    for (const auto& c : columns) {
        if (c.size() != m) throw std::invalid_argument("least squares column length mismatch");
    }
    // Column-major copy, scaled to unit norm for conditioning.
    std::vector<std::vector<double>> a = columns;
    std::vector<double> scale(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0;
        for (double v : a[j]) s += v * v;
        s = std::sqrt(s);
        if (s == 0) throw std::invalid_argument("least squares: zero column");
        scale[j] = s;
        for (double& v : a[j]) v /= s;
    }
    std::vector<double> b = y;
    for (std::size_t k = 0; k < n; ++k) {
        double norm = 0;
        for (std::size_t i = k; i < m; ++i) norm += a[k][i] * a[k][i];
        norm = std::sqrt(norm);
        if (norm < 1e-14) throw std::invalid_argument("least squares: rank deficient");
        const double alpha = a[k][k] > 0 ? -norm : norm;
        std::vector<double> v(m, 0.0);
        for (std::size_t i = k; i < m; ++i) v[i] = a[k][i];
        v[k] -= alpha;
        double vv = 0;
        for (std::size_t i = k; i < m; ++i) vv += v[i] * v[i];
        auto reflect = [&](std::vector<double>& x) {
            double d = 0;
            for (std::size_t i = k; i < m; ++i) d += v[i] * x[i];
            d = 2 * d / vv;
            for (std::size_t i = k; i < m; ++i) x[i] -= d * v[i];
        };
        for (std::size_t j = k; j < n; ++j) reflect(a[j]);
        reflect(b);
    }
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= a[j][k] * x[j];
        x[k] = s / a[k][k];
    }
    for (std::size_t j = 0; j < n; ++j) x[j] /= scale[j];
    return x;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> ones(x.size(), 1.0);
    auto sol = least_squares({x, ones}, y);
    LineFit f{sol[0], sol[1], 0};
    for (std::size_t i = 0; i < x.size(); ++i) {
        f.max_residual = std::max(f.max_residual, std::abs(f.slope * x[i] + f.intercept - y[i]));
    }
    return f;
}

}  // namespace selfsim
