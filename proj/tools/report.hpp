#pragma once

#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace selfsim::cli {

using nlohmann::json;

/// JSON text with every floating value printed with %.17g; non-finite
/// values become null. indent < 0 gives the compact form.
std::string dump_json(const json& value, int indent = -1);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);

struct Invariant {
    std::string name;
    bool passed = false;
    std::string detail;
};

class RunReport {
public:
    explicit RunReport(std::string command) : command_(std::move(command)) {}

    json& inputs() { return inputs_; }
    json& results() { return results_; }

    void check(const std::string& name, bool passed, const std::string& detail = {});
    /// A module error; also recorded as a failed "completed" invariant.
    void error(const std::string& where, const std::string& message);

    bool all_passed() const;
    const std::vector<Invariant>& invariants() const { return invariants_; }

    /// command, inputs, results, errors and invariants: the hashed part.
    json payload() const;
    /// Hex FNV-1a of the compact dump of payload().
    std::string hash() const;
    /// payload() plus the hash and the wall-clock time.
    json document(double wall_seconds) const;

private:
    std::string command_;
    json inputs_ = json::object();
    json results_ = json::object();
    json errors_ = json::array();
    std::vector<Invariant> invariants_;
};

/// "key = value" lines of a flattened document, nested keys joined by '.'.
std::string table_text(const json& doc);

}  // namespace selfsim::cli
