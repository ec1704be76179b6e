#pragma once

// Minimal SVG rendering for sweep output: line plots and heatmaps.

#include "pblockade/grid.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pblockade {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<std::optional<double>> y;   // gaps are skipped
};

struct PlotLabels {
    std::string title;
    std::string x;
    std::string y;
};

// With log_y, values are drawn as log10 and non-positive points are skipped.
void write_line_svg(std::ostream& os, const PlotLabels& labels, const std::vector<Series>& series, bool log_y);

// Heatmap with axis1 horizontal and axis2 vertical; colour is log10 of the
// value when log_scale is set. Invalid cells are left blank. An optional
// overlay curve (in axis units) is drawn on top.
void write_heatmap_svg(std::ostream& os, const PlotLabels& labels, const Grid2D& grid, bool log_scale,
                       const std::optional<Series>& overlay = std::nullopt);

} // namespace pblockade
