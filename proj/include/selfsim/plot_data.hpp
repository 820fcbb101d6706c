#pragma once

#include "selfsim/backward_shoot.hpp"
#include "selfsim/enumerator.hpp"
#include "selfsim/forward_shoot.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace selfsim {

/// Numeric table written as CSV. Comment lines start with "# ", then one
/// header line with the column names, then rows printed with %.17g so that
/// reading them back with strtod is bit-exact.
struct PlotTable {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    friend bool operator==(const PlotTable&, const PlotTable&) = default;
};

void write_csv(std::ostream& out, const PlotTable& table);
void write_csv(const std::string& path, const PlotTable& table);
/// Throws std::runtime_error on malformed input or I/O failure.
PlotTable read_csv(std::istream& in);
PlotTable read_csv(const std::string& path);

/// Columns r, w, w_r on `samples` points of [r_lo, r_hi], log-spaced when
/// `log_spaced`.
PlotTable profile_table(const ProfileModel& model, const ForwardShot& shot, double r_lo, double r_hi,
                        int samples, bool log_spaced = false);
PlotTable profile_table(const ProfileModel& model, const BackwardShot& shot, double r_lo, double r_hi,
                        int samples, bool log_spaced = false);

/// Columns param, zeta, slope for every point of the table.
PlotTable curve_table(const CurveTable& curve);

}  // namespace selfsim
