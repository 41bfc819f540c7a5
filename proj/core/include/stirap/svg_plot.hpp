#pragma once

// Minimal self-contained SVG line plots for scan results. Points with
// non-finite coordinates break the polyline instead of being drawn.

#include <string>
#include <vector>

namespace stirap {

struct PlotSeries {
    std::string label;
    std::vector<double> x, y;
};

struct PlotOptions {
    std::string title, x_label, y_label;
    int width = 860;
    int height = 540;
};

std::string render_svg_plot(const std::vector<PlotSeries>& series,
                            const PlotOptions& opt);
void write_svg_plot(const std::string& path,
                    const std::vector<PlotSeries>& series,
                    const PlotOptions& opt);

} // namespace stirap
