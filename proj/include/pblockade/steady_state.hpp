#pragma once

// Closed-form weak-drive steady state of the effective model and the
// equal-time photon statistics derived from the truncated amplitudes.

#include "pblockade/core_model.hpp"
#include "pblockade/dynamics.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pblockade {

struct PhotonStats {
    double p1 = 0.0;
    double p2 = 0.0;
    // Undefined (nullopt) when P1 + 2 P2 carries no photonic weight.
    std::optional<double> g2;
    double n_cavity_paper = 0.0;   // |c1g|^2
    double n_cavity_full = 0.0;    // |c1g|^2 + |c1e|^2 + 2|c2g|^2
    double norm = 0.0;
};

// Denominators J^2 - M delta_e and J^2 - M N must exceed this in modulus.
inline constexpr double singular_threshold = 1e-10;

// Perturbative steady state with c0g = 1. Throws SingularDenominator.
AmplitudeState analytic_amplitudes(const EffectiveParams& eff);

// Numerator of c2g (up to the sqrt(2)(J^2 - MN)(J^2 - M delta_e) factor).
// Vanishes exactly on the optimal-blockade manifold.
cplx two_photon_numerator(const EffectiveParams& eff);

// Throws DomainError on a non-finite state.
PhotonStats photon_stats(const AmplitudeState& s);

// analytic_amplitudes + photon_stats for a full parameter set.
PhotonStats analytic_stats(const SystemParams& p);

struct DetuningSweep {
    std::vector<double> delta_c;
    // nullopt marks a point with a singular denominator.
    std::vector<std::optional<PhotonStats>> forward;
    std::vector<std::optional<PhotonStats>> backward;
};

// Evaluates both input directions at every detuning, in input order.
DetuningSweep g2_of_detuning(const SystemParams& p, const std::vector<double>& delta_c_values);

// Columns: delta_c, direction, p1, p2, g2, n_paper, n_full, valid.
// Invalid points and undefined g2 are empty cells.
void write_detuning_csv(std::ostream& os, const DetuningSweep& sweep);

std::vector<double> linspace(double lo, double hi, std::size_t n);

} // namespace pblockade
