#pragma once

#include <string>
#include <vector>

namespace zadnet {
namespace svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool mark_points = false;
};

/// Extra emphasized marker (e.g. a per-curve minimizer).
struct Marker {
    double x = 0.0;
    double y = 0.0;
    int series = 0;  // color index
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::string description;  // embedded in <desc>; carries provenance
    int width = 880;
    int height = 540;
};

/// Self-contained polyline chart with tick labels and a legend. Output is a
/// pure function of the inputs (no timestamps), so re-rendering reproduces
/// identical bytes.
std::string render_line_plot(const PlotSpec& spec, const std::vector<Series>& series,
                             const std::vector<Marker>& markers = {});

}  // namespace svg
}  // namespace zadnet
