#pragma once

#include <vector>

namespace selfsim {

/// Solves min |A x - y| for a tall, full-rank A given by columns, using
/// Householder QR. Throws std::invalid_argument on rank deficiency.
std::vector<double> least_squares(const std::vector<std::vector<double>>& columns, const std::vector<double>& y);

/// Slope and intercept of the least-squares line through (x, y).
struct LineFit {
    double slope = 0;
    double intercept = 0;
    double max_residual = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace selfsim
