#pragma once

#include <functional>
#include <vector>

namespace selfsim {

/// Chebyshev expansion sum a_k T_k(x) on an interval [lo, hi], built from
/// values at the Chebyshev-Lobatto points.
class Chebyshev {
public:
    Chebyshev() = default;
    Chebyshev(double lo, double hi, std::vector<double> coeffs);

    /// Lobatto points lo..hi in increasing order (n + 1 of them).
    static std::vector<double> nodes(double lo, double hi, int n);
    /// Interpolates values given at nodes(lo, hi, n).
    static Chebyshev from_values(double lo, double hi, const std::vector<double>& values);
    static Chebyshev from_function(double lo, double hi, int n, const std::function<double(double)>& f);

    double operator()(double x) const;
    Chebyshev derivative() const;
    /// Antiderivative vanishing at lo.
    Chebyshev antiderivative() const;

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    const std::vector<double>& coefficients() const { return a_; }

private:
    double lo_ = 0;
    double hi_ = 1;
    std::vector<double> a_;
};

}  // namespace selfsim
