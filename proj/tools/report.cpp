#include "report.hpp"

#include <cmath>
#include <cstdio>

namespace selfsim::cli {

namespace {

void dump(const json& v, int indent, int depth, std::string& out) {
    const bool pretty = indent >= 0;
    auto newline = [&](int d) {
        if (pretty) {
            out += '\n';
            out.append(static_cast<std::size_t>(indent * d), ' ');
        }
    };
    switch (v.type()) {
    case json::value_t::object: {
        if (v.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (!first) out += ',';
            first = false;
            newline(depth + 1);
            out += json(it.key()).dump();
            out += pretty ? ": " : ":";
            dump(it.value(), indent, depth + 1, out);
        }
        newline(depth);
        out += '}';
        return;
    }
    case json::value_t::array: {
        if (v.empty()) {
            out += "[]";
            return;
        }
        out += '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ',';
            newline(depth + 1);
            dump(v[i], indent, depth + 1, out);
        }
        newline(depth);
        out += ']';
        return;
    }
    case json::value_t::number_float: {
        const double x = v.get<double>();
        if (!std::isfinite(x)) {
            out += "null";
            return;
        }
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        out += buf;
        return;
    }
    default:
        out += v.dump();
    }
}

void flatten(const json& v, const std::string& prefix, std::string& out) {
    if (v.is_object() && !v.empty()) {
        for (auto it = v.begin(); it != v.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
        return;
    }
    if (v.is_array() && !v.empty()) {
        for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "[" + std::to_string(i) + "]", out);
        return;
    }
    out += prefix + " = ";
    out += v.is_string() ? v.get<std::string>() : dump_json(v);
    out += '\n';
}

}  // namespace

std::string dump_json(const json& value, int indent) {
    std::string out;
    dump(value, indent, 0, out);
    return out;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void RunReport::check(const std::string& name, bool passed, const std::string& detail) {
    invariants_.push_back({name, passed, detail});
}

void RunReport::error(const std::string& where, const std::string& message) {
    errors_.push_back({{"where", where}, {"message", message}});
    check("completed: " + where, false, message);
}

bool RunReport::all_passed() const {
    for (const auto& i : invariants_)
        if (!i.passed) return false;
    return true;
}

json RunReport::payload() const {
    json inv = json::array();
    for (const auto& i : invariants_) inv.push_back({{"name", i.name}, {"passed", i.passed}, {"detail", i.detail}});
    return {{"command", command_},      {"inputs", inputs_},           {"results", results_},
            {"errors", errors_},        {"invariants", inv},           {"all_invariants_passed", all_passed()}};
}

std::string RunReport::hash() const {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(dump_json(payload()))));
    return buf;
}

json RunReport::document(double wall_seconds) const {
    json doc = payload();
    doc["determinism_hash"] = hash();
    doc["wall_clock_seconds"] = wall_seconds;
    return doc;
}

std::string table_text(const json& doc) {
    std::string out;
    flatten(doc, "", out);
    return out;
}

}  // namespace selfsim::cli
