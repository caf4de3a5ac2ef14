#pragma once

#include <string>
#include <vector>

namespace regrowth {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "black";
    bool dashed = false;
};

struct LineChart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    std::string note;  ///< written into the <desc> element
};

/// Standalone SVG document with axes, ticks, a legend and one polyline per
/// series. Non-finite points are skipped.
std::string render_svg(const LineChart& chart);

/// Up to about `target` round tick positions covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, int target = 6);

}  // namespace regrowth
