#include "pblockade/grid.hpp"

#include "pblockade/config.hpp"

#include <ostream>

namespace pblockade {

double Axis::value(std::size_t i) const
{
    if (n <= 1) {
        return min;
    }
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(n - 1);
}

std::vector<double> Axis::values() const
{
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = value(i);
    }
    return v;
}

double Axis::step() const
{
    return n > 1 ? (max - min) / static_cast<double>(n - 1) : 0.0;
}

Grid2D::Grid2D(Axis a1, Axis a2) : axis1(std::move(a1)), axis2(std::move(a2)), values(axis1.n * axis2.n)
{
}

std::optional<Grid2D::Location> Grid2D::argmin() const
{
    std::optional<Location> best;
    for (std::size_t i = 0; i < axis1.n; ++i) {
        for (std::size_t j = 0; j < axis2.n; ++j) {
            const auto& v = at(i, j);
            if (v && (!best || *v < best->value)) {
                best = Location{i, j, *v};
            }
        }
    }
    return best;
}

void write_grid_csv(std::ostream& os, const Grid2D& grid,
                    const std::vector<std::pair<std::string, std::string>>& header)
{
    auto axis_line = [&](const char* label, const Axis& a) {
        os << "# " << label << '=' << a.name << ", " << format_double(a.min) << ", " << format_double(a.max)
           << ", " << a.n << '\n';
    };
    axis_line("axis1", grid.axis1);
    axis_line("axis2", grid.axis2);
    for (const auto& [k, v] : header) {
        os << "# " << k << '=' << v << '\n';
    }
    for (std::size_t i = 0; i < grid.axis1.n; ++i) {
        for (std::size_t j = 0; j < grid.axis2.n; ++j) {
            if (j > 0) {
                os << ',';
            }
            if (const auto& v = grid.at(i, j)) {
                os << format_double(*v);
            }
        }
        os << '\n';
    }
}

} // namespace pblockade
