#ifndef TILEPERM_SVG_HPP
#define TILEPERM_SVG_HPP

#include <string>
#include <vector>

namespace tileperm {

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
};

// Minimal self-contained line plot: axes, ticks, one polyline per series,
// legend when labels are present. Good enough for eyeballing frequency
// tracks and sweep curves.
std::string line_plot_svg(const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<SvgSeries>& series,
                          int width = 900, int height = 420);

}  // namespace tileperm

#endif  // TILEPERM_SVG_HPP
