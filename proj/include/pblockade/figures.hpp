#pragma once

// Built-in figure presets: deterministic CSV data plus a quick-look SVG.

#include "pblockade/sweep.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pblockade {

struct FigureFile {
    std::string filename;
    std::string content;
};

struct Figure {
    std::string name;
    std::vector<FigureFile> files;
};

const std::vector<std::string>& figure_names();

// Throws UnknownFigure.
Figure make_figure(std::string_view name, unsigned jobs = 1);

// Writes every file of `fig` into `dir`, creating it if needed.
void write_figure(const Figure& fig, const std::filesystem::path& dir);

// SVG for an arbitrary sweep: line plot for 1-D, heatmap of the first
// direction for 2-D. g2 is drawn on a log scale.
std::string sweep_svg(const SweepResult& r, Direction d);

} // namespace pblockade
