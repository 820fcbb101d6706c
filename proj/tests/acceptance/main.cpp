// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
//
//   acceptance [-v] [id ...]
//
// SELFSIM_THREADS sets the worker count of the enumeration runs.

#include "selfsim/acceptance.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <vector>

int main(int argc, char** argv) {
    bool verbose = false;
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "-v") == 0) {
            verbose = true;
        } else {
            ids.push_back(std::atoi(argv[i]));
        }
    }
    if (ids.empty()) {
        for (int id = 1; id <= selfsim::acceptance_criterion_count; ++id) ids.push_back(id);
    }
    selfsim::AcceptanceOptions options;
    if (const char* t = std::getenv("SELFSIM_THREADS")) options.threads = std::max(1, std::atoi(t));

    int failed = 0;
    for (int id : ids) {
        const auto result = selfsim::run_criterion(id, options);
        std::printf("%s\n", selfsim::format_result(result, verbose || !result.passed).c_str());
        std::fflush(stdout);
        if (!result.passed) ++failed;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(ids.size()) - failed, ids.size());
    return failed == 0 ? 0 : 1;
}
