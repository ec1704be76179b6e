#pragma once

// Dissipation-free eigenenergies of the effective Hamiltonian restricted to
// the n-excitation block span{|n,g>, |n-1,e>}.

#include "pblockade/core_model.hpp"

namespace pblockade {

struct EnergyPair {
    int n = 1;
    double eps_plus = 0.0;
    double eps_minus = 0.0;
};

// Uses the real parts of the model (delta_c, delta_e, G, J); drives are
// ignored. n may exceed the two-excitation truncation used for dynamics.
// Throws DomainError if n < 1.
EnergyPair eigenenergies(const EffectiveParams& eff, int n);

// eps_{2-} - 2 eps_{1-}; zero for an equally spaced lower ladder.
double anharmonicity(const EffectiveParams& eff);

} // namespace pblockade
