#pragma once

#include <string>
#include <vector>

namespace selfsim {

struct AcceptanceOptions {
    int threads = 1;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    /// All checks held and the run finished within the time limit.
    bool passed = false;
    double seconds = 0;
    double time_limit = 0;
    /// One entry per check, "ok: ..." or "FAIL: ...".
    std::vector<std::string> details;
};

inline constexpr int acceptance_criterion_count = 10;

/// Runs criterion `id` in 1..10; exceptions become failed results.
CriterionResult run_criterion(int id, const AcceptanceOptions& options = {});

/// "PASS 3 <title> (1.23 s)" followed by the details.
std::string format_result(const CriterionResult& result, bool verbose);

}  // namespace selfsim
