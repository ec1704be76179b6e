#pragma once

// Optimal-blockade solver: finds the Raman coupling J and relative phase theta
// (optionally together with the cavity detuning) at which the two-photon
// amplitude c2g vanishes, plus J-theta scans and forward/backward contrast.

#include "pblockade/core_model.hpp"
#include "pblockade/grid.hpp"

#include <optional>
#include <vector>

namespace pblockade {

struct OptimalPoint {
    double J = 0.0;
    double theta = 0.0;         // (-pi, pi]
    double delta_c_opt = 0.0;   // detuning the point was solved at
    double residual = 0.0;      // |c2g| from the analytic steady state
    Direction direction = Direction::Forward;
};

struct OptimizerOptions {
    std::vector<double> J_starts{0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 4.0, -4.0};
    std::vector<double> theta_starts{0.0, 1.5707963267948966, -1.5707963267948966, 3.141592653589793};
    int max_iterations = 100;
};

// Every distinct converged root, ordered by |J| then |theta|. Joint solve
// (fix_delta_c == false) also imposes delta_c = G + J^2/delta_e.
// Throws NoRealSolution (E_eg == 0 or no start converges) and
// DegenerateDetuning (delta_e == 0 in a joint solve).
std::vector<OptimalPoint> find_optimal_roots(const SystemParams& p, bool fix_delta_c,
                                             const OptimizerOptions& opt = {});

// Root with the smallest |J|, ties broken by theta closest to 0.
OptimalPoint solve_optimal(const SystemParams& p, bool fix_delta_c, const OptimizerOptions& opt = {});

// Newton from a single start at fixed delta_c; nullopt if it does not converge.
std::optional<OptimalPoint> polish_optimal(const SystemParams& p, double J0, double theta0, int max_iterations = 100);

// `p` with the coupling, phase and (for a joint solve) detuning of `pt`.
SystemParams apply_optimal(const SystemParams& p, const OptimalPoint& pt);

// Single-excitation resonance G + J^2/delta_e.
double resonant_detuning(const SystemParams& p, double J);

struct JThetaScan {
    Grid2D forward;    // g2, axis1 = J, axis2 = theta
    Grid2D backward;
};

// Requires at least 8 points per axis.
JThetaScan scan_j_theta(const SystemParams& p, double J_min, double J_max, double theta_min, double theta_max,
                        std::size_t resolution, unsigned jobs = 1);

struct NonreciprocityReport {
    double delta_c = 0.0;
    std::optional<double> g2_forward;
    std::optional<double> g2_backward;
    // log10(g2_backward / g2_forward); set when both are defined and positive.
    std::optional<double> contrast;
};

NonreciprocityReport nonreciprocity(const SystemParams& p);

struct NonreciprocalOptions {
    double J_abs_min = 1.5;
    double J_abs_max = 5.0;
    std::size_t resolution = 201;
    unsigned jobs = 1;
};

struct NonreciprocalPoint {
    double J = 0.0;
    double theta = 0.0;
    bool polished = false;        // Newton reached an exact c2g zero
    bool nonreciprocal = false;   // backward g2 > 1; false is the NotNonreciprocal warning
    NonreciprocityReport report;
};

// Minimises forward g2 over |J| in [J_abs_min, J_abs_max] and all theta at
// the target detuning, then reports the backward g2 at the same point.
NonreciprocalPoint nonreciprocal_point(const SystemParams& p, double target_delta_c,
                                       const NonreciprocalOptions& opt = {});

} // namespace pblockade
