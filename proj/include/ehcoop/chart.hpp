#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ehcoop {

struct ChartSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
    std::string color = "#1f77b4";
    bool dashed = false;
    bool markers_only = false;
};

struct ChartSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::string note;     // small print under the title
    bool log_x = false;
    bool log_y = true;
    int width = 760;
    int height = 520;
};

// Renders a self-contained SVG line chart: inline styles only, no
// external references. Points that cannot be placed on a log axis
// (zero or negative) are skipped, splitting the polyline.
std::string render_line_chart(const ChartSpec& spec,
                              const std::vector<ChartSeries>& series);

}  // namespace ehcoop
