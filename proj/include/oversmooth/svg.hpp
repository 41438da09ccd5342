#pragma once

#include <string>
#include <utility>
#include <vector>

namespace oversmooth {

struct ScatterSeries {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> points;
};

/// Self-contained scatter plot: axis ticks, optional y = x reference line,
/// and a legend. Returns a complete standalone SVG document.
std::string scatter_svg(const std::vector<ScatterSeries>& series, const std::string& title,
                        const std::string& x_label, const std::string& y_label,
                        bool identity_line = true);

} // namespace oversmooth
