#pragma once

#include "selfsim/exponents.hpp"

#include <vector>

namespace selfsim {

/// Linear finite elements on s = log r for
///   -(mu psi_s)_s - V mu psi + mu e^(2s) psi/(p-1) = lambda mu e^(2s) psi,
/// mu = e^((N-2)s) e^(-e^(2s)/4), with lumped mass. The r^beta branch at the
/// origin is selected by psi_s = beta psi at r_min; psi = 0 at r_max.
struct OperatorOracleConfig {
    double r_min = 1e-3;
    double r_max = 12;
    int intervals = 2000;
    /// Second solve with twice the intervals and one Richardson step.
    bool richardson = true;
};

/// Lowest `count` eigenvalues in increasing order. Needs p > p_JL(N).
std::vector<double> discretized_eigenvalues(const ProblemParams& params, int count,
                                            const OperatorOracleConfig& cfg = {});

}  // namespace selfsim
