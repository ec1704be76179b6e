#pragma once

// Time evolution of the two-excitation pure-state ansatz
//   |psi> = c0g|0,g> + c1g|1,g> + c0e|0,e> + c2g|2,g> + c1e|1,e>
// under the effective Hamiltonian with cavity loss -i kappa/2 a^dag a.

#include "pblockade/core_model.hpp"

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

namespace pblockade {

struct AmplitudeState {
    cplx c0g{1.0, 0.0};
    cplx c1g;
    cplx c0e;
    cplx c2g;
    cplx c1e;
    double t = 0.0;

    static AmplitudeState vacuum() { return {}; }

    double norm2() const;
    bool finite() const;

    // Order: c0g, c1g, c0e, c2g, c1e.
    std::array<cplx, 5> amplitudes() const { return {c0g, c1g, c0e, c2g, c1e}; }
    static AmplitudeState from_amplitudes(const std::array<cplx, 5>& a, double t = 0.0);
};

// dC/dt in the order c0g, c1g, c0e, c2g, c1e.
using AmplitudeDerivative = std::array<cplx, 5>;

AmplitudeDerivative rhs(const AmplitudeState& s, const EffectiveParams& eff, bool hold_c0g);

struct IntegratorConfig {
    double dt = 1e-3;
    double t_max = 200.0;
    double ss_window = 1.0;
    double ss_tol = 1e-8;
    bool hold_c0g = true;
    // Steps between recorded samples; the initial and final states are always kept.
    std::size_t sample_every = 100;

    void validate() const;
};

struct Trajectory {
    std::vector<AmplitudeState> states;
    bool steady = false;
    std::size_t steps = 0;

    const AmplitudeState& final_state() const { return states.back(); }
};

// One classical fourth-order Runge-Kutta step.
AmplitudeState rk4_step(const AmplitudeState& s, const EffectiveParams& eff, double dt, bool hold_c0g);

// Fixed-step RK4 from `initial` until the trailing-window steady-state test
// passes or t_max is reached. Throws NonFiniteState on overflow/NaN and
// DomainError when the initial state is not normalized.
Trajectory evolve(const AmplitudeState& initial, const EffectiveParams& eff, const IntegratorConfig& cfg);

// Exact stationary point of the equations with c0g held at 1, i.e. the state
// a long RK4 run converges to (a fixed point of the RK4 map for any stable dt).
// Unlike the perturbative closed form it keeps every feedback term of the
// truncated ansatz. Throws NumericalError if the system is singular.
AmplitudeState stationary_state(const EffectiveParams& eff);

// Columns: t, re/im of c0g c1g c0e c2g c1e, norm2.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

} // namespace pblockade
