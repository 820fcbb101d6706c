#include "selfsim/plot_data.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace selfsim {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_cell(const std::string& s) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') throw std::runtime_error("bad CSV number '" + s + "'");
    return v;
}

std::vector<double> radii(double r_lo, double r_hi, int samples, bool log_spaced) {
    if (samples < 2 || !(r_lo < r_hi)) throw std::invalid_argument("profile table needs r_lo < r_hi and 2+ samples");
    if (log_spaced && !(r_lo > 0)) throw std::invalid_argument("log-spaced profile table needs r_lo > 0");
    std::vector<double> r(samples);
    for (int i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) / (samples - 1);
        r[i] = log_spaced ? r_lo * std::pow(r_hi / r_lo, t) : r_lo + (r_hi - r_lo) * t;
    }
    r.back() = r_hi;
    return r;
}

template <typename Shot>
PlotTable profile_rows(const ProfileModel& model, const Shot& shot, double r_lo, double r_hi, int samples,
                       bool log_spaced) {
    PlotTable t;
    t.columns = {"r", "w", "w_r"};
    for (double r : radii(r_lo, r_hi, samples, log_spaced)) {
        const auto y = shot.at(model, r);
        t.rows.push_back({r, y[0], y[1]});
    }
    return t;
}

}  // namespace

void write_csv(std::ostream& out, const PlotTable& table) {
    for (const auto& c : table.comments) out << "# " << c << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    char buf[32];
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size()) throw std::invalid_argument("CSV row width differs from header");
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            out << (i ? "," : "") << buf;
        }
        out << '\n';
    }
}

void write_csv(const std::string& path, const PlotTable& table) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_csv(out, table);
    if (!out) throw std::runtime_error("write to " + path + " failed");
}

PlotTable read_csv(std::istream& in) {
    PlotTable t;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (!header && line.rfind("# ", 0) == 0) {
            t.comments.push_back(line.substr(2));
            continue;
        }
        if (!header) {
            t.columns = split(line);
            header = true;
            continue;
        }
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != t.columns.size()) throw std::runtime_error("CSV row width differs from header");
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(parse_cell(c));
        t.rows.push_back(std::move(row));
    }
    if (!header) throw std::runtime_error("CSV has no header line");
    return t;
}

PlotTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_csv(in);
}

PlotTable profile_table(const ProfileModel& model, const ForwardShot& shot, double r_lo, double r_hi, int samples,
                        bool log_spaced) {
    return profile_rows(model, shot, r_lo, r_hi, samples, log_spaced);
}

PlotTable profile_table(const ProfileModel& model, const BackwardShot& shot, double r_lo, double r_hi, int samples,
                        bool log_spaced) {
    return profile_rows(model, shot, r_lo, r_hi, samples, log_spaced);
}

PlotTable curve_table(const CurveTable& curve) {
    PlotTable t;
    t.columns = {"param", "zeta", "slope"};
    for (const auto& p : curve.points) t.rows.push_back({p.param, p.zeta, p.slope});
    return t;
}

}  // namespace selfsim
