#pragma once

// 1-D and 2-D parameter sweeps of steady-state photon statistics.

#include "pblockade/config.hpp"
#include "pblockade/core_model.hpp"
#include "pblockade/grid.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pblockade {

inline constexpr std::string_view tool_version = "pblockade 1.0.0";

enum class Observable { G2, NPaper, NFull, P1, P2 };
enum class DirectionSet { Forward, Backward, Both };

std::string_view to_string(Observable o);
std::string_view to_string(DirectionSet d);
// Throw ConfigError on unknown names.
Observable parse_observable(std::string_view s);
DirectionSet parse_direction_set(std::string_view s);

std::vector<Direction> directions_of(DirectionSet d);

struct SweepAxis {
    std::string name;   // a numeric SystemParams field, `J` or `theta`
    double min = 0.0;
    double max = 1.0;
    std::size_t n = 2;
};

struct SweepSpec {
    SweepAxis axis1;
    std::optional<SweepAxis> axis2;
    std::vector<Setting> overrides;
    DirectionSet directions = DirectionSet::Both;
    Observable observable = Observable::G2;
    // Replace (J, theta) at every point by the joint optimum of that point's
    // parameters, solved separately for each direction.
    bool optimal_J_theta = false;

    // Throws ConfigError naming the offending field.
    void validate() const;
};

// Names accepted as sweep axes.
const std::vector<std::string>& sweepable_keys();

// Sets one axis parameter. kappa1 and kappa2 stay complementary, `theta`
// rotates phi_he, and `J` is stored as an explicit Raman coupling.
SystemParams set_parameter(SystemParams p, std::string_view name, double value);

struct SweepResult {
    SweepSpec spec;
    SystemParams base;                 // after overrides
    std::vector<Direction> directions;
    // One grid per direction. A 1-D sweep has a single-point axis2 named "".
    std::vector<Grid2D> grids;
    std::uint64_t config_hash = 0;
    std::string version{tool_version};

    bool two_dimensional() const { return spec.axis2.has_value(); }
    const Grid2D& grid(Direction d) const;
};

SweepResult run_sweep(const SweepSpec& spec, const SystemParams& base, unsigned jobs = 1);

// Observable of a single parameter set; nullopt for singular or undefined points.
std::optional<double> observe(const SystemParams& p, Observable o);

std::uint64_t fnv1a(std::string_view text);

// Provenance `# key=value` lines shared by every output file.
std::vector<std::pair<std::string, std::string>> provenance(const SweepResult& r);

// 1-D: columns <axis1>, then <observable>_<direction> per direction.
// 2-D: grid CSV of the given direction.
void write_sweep_csv(std::ostream& os, const SweepResult& r, Direction d);
void write_sweep_1d_csv(std::ostream& os, const SweepResult& r);

} // namespace pblockade
