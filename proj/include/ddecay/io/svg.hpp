#pragma once

#include <string>
#include <vector>

namespace dd {

struct Series {
    std::string label;
    std::vector<double> x, y;
};

struct PlotSpec {
    std::string title;
    std::string xlabel, ylabel;
    bool logx = false;  // plot log10 x
    int width = 720, height = 480;
};

// self-contained SVG line plot; non-finite points break the polyline
std::string svg_line_plot(const std::vector<Series>& series, const PlotSpec& spec);

}  // namespace dd
