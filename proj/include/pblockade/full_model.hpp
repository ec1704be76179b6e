#pragma once

// Un-eliminated three-level model: cavity mode plus Lambda atom with levels
// g, e, h, integrated in the rotating frame where the atom-cavity and atomic
// drive couplings keep an explicit time dependence. Used only to check the
// effective two-ground-state reduction.

#include "pblockade/core_model.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

namespace pblockade {

struct FullModelParams {
    double kappa = 1.0;
    double kappa1 = 0.2;
    double kappa2 = 1.8;
    // Frequencies in units of kappa; the ground level g sits at zero.
    double omega_c = 1000.0;
    double omega_e = 200.0;
    double omega_h = 1100.0;
    double omega_p = 1000.0;
    double omega_he = 900.0;
    double omega_eg = 200.5;
    double g = 10.0;
    double E_he = 0.0;
    double E_eg = 0.01;
    double b_in = 0.02;
    double phi_p = 0.0;
    double phi_he = 0.0;
    double phi_eg = 0.0;
    Direction direction = Direction::Forward;
    int n_max = 2;

    double delta_c() const { return omega_c - omega_p; }
    double delta_p() const { return omega_h - omega_p; }
    double delta_he() const { return omega_h - omega_e - omega_he; }
    double delta_eg() const { return omega_e - omega_eg; }

    std::size_t dimension() const { return 3 * static_cast<std::size_t>(n_max + 1); }

    // Throws DomainError.
    void validate() const;

    // Frequencies realising the detunings of `p` with the atomic drive on
    // two-photon (Raman) resonance, delta_he + delta_eg = delta_p. A negative
    // Raman coupling is carried by a pi shift of phi_he.
    static FullModelParams from_system(const SystemParams& p, int n_max = 2);
};

// Basis index of |n, level>, level 0 = g, 1 = e, 2 = h.
inline std::size_t full_index(int n, int level) { return 3 * static_cast<std::size_t>(n) + static_cast<std::size_t>(level); }

using FullState = std::vector<cplx>;

FullState full_vacuum(const FullModelParams& fp);

// dC/dt at time t, including -i kappa n/2 on every n-photon component.
// With hold_vacuum the |0,g> derivative is forced to zero.
FullState full_rhs(const FullState& state, double t, const FullModelParams& fp, bool hold_vacuum = false);

struct FullIntegratorConfig {
    double dt = 2e-3;
    double transient = 100.0;
    double checkpoint = 10.0;   // spacing of averaging windows after the transient
    double t_max = 20000.0;
    double ss_tol = 1e-9;       // relative change of windowed averages that counts as settled
    bool hold_vacuum = true;

    void validate() const;
};

struct FullSteadyState {
    std::vector<double> photon_distribution;   // P_n, normalised by the total norm
    std::optional<double> g2;
    double norm = 0.0;
    double t_end = 0.0;
    double window = 0.0;       // averaging period
    double last_change = 0.0;  // relative change between the last two windows
    bool settled = false;
};

// Fixed-step RK4 from the vacuum; observables are averaged over one period
// of the slowest explicit phase in windows every `checkpoint` after the
// transient, until consecutive windows agree to ss_tol or t_max is reached.
FullSteadyState full_steady_state(const FullModelParams& fp, const FullIntegratorConfig& cfg = {});

// Fixed-step RK4 trajectory with samples every `sample_every` steps.
std::vector<std::pair<double, FullState>> full_trajectory(const FullModelParams& fp, double dt, double t_max,
                                                          bool hold_vacuum, std::size_t sample_every = 100);

struct ValidationReport {
    double g2_full = 0.0;
    double g2_effective = 0.0;              // stationary state of the effective amplitude equations
    std::optional<double> g2_analytic;      // perturbative closed form
    double rel_diff = 0.0;                  // |g2_full - g2_effective| / g2_effective
    double tolerance = 0.2;
    bool pass = false;
    bool regime_ok = false;                 // |delta_p / g| > 5
    int n_max = 2;
    double t_full = 0.0;
};

// Compares full and effective g2 at identical physical parameters. Throws
// NotConverged if the full-model windows still differ by more than tolerance/10.
ValidationReport validate_effective(const SystemParams& p, double tolerance = 0.2, int n_max = 2,
                                    const FullIntegratorConfig& cfg = {});

void write_report(std::ostream& os, const ValidationReport& r);

} // namespace pblockade
