#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pblockade {

struct Axis {
    std::string name;
    double min = 0.0;
    double max = 1.0;
    std::size_t n = 2;

    double value(std::size_t i) const;
    std::vector<double> values() const;
    double step() const;
};

// Row-major (axis1 outer) grid of optional values; nullopt marks an invalid point.
struct Grid2D {
    Axis axis1;
    Axis axis2;
    std::vector<std::optional<double>> values;

    Grid2D() = default;
    Grid2D(Axis a1, Axis a2);

    std::optional<double>& at(std::size_t i, std::size_t j) { return values[i * axis2.n + j]; }
    const std::optional<double>& at(std::size_t i, std::size_t j) const { return values[i * axis2.n + j]; }

    struct Location {
        std::size_t i = 0;
        std::size_t j = 0;
        double value = 0.0;
    };
    // Smallest valid value; ties resolved by lowest flat index.
    std::optional<Location> argmin() const;
};

// Comment preamble (`# axis1=name, min, max, n`, `# axis2=...`, plus any extra
// `# key=value` lines) followed by one CSV row per axis1 value.
void write_grid_csv(std::ostream& os, const Grid2D& grid,
                    const std::vector<std::pair<std::string, std::string>>& header = {});

} // namespace pblockade
