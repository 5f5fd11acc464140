#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace mkdv {

struct SvgSeries {
    std::string label;
    std::string color;
    bool dashed = false;
    std::vector<std::pair<double, double>> points;
};

/// Writes a log-log line chart. Points with a non-positive coordinate are
/// dropped (they have no place on log axes).
void write_loglog_svg(const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<SvgSeries>& series,
                      std::ostream& os);

} // namespace mkdv
