#include "pblockade/spectrum.hpp"

#include "pblockade/errors.hpp"

#include <cmath>

namespace pblockade {

EnergyPair eigenenergies(const EffectiveParams& eff, int n)
{
    if (n < 1) {
        throw DomainError("eigenenergies: excitation number must be >= 1");
    }
    const double nn = n;
    const double mean = 0.5 * ((2.0 * nn - 1.0) * eff.delta_c + eff.delta_e - nn * eff.G);
    const double detuning = nn * eff.G - eff.delta_c + eff.delta_e;
    // hypot avoids overflow/cancellation in sqrt(4 n J^2 + d^2)
    const double half_split = 0.5 * std::hypot(2.0 * std::sqrt(nn) * eff.J, detuning);
    return {n, mean + half_split, mean - half_split};
}

double anharmonicity(const EffectiveParams& eff)
{
    return eigenenergies(eff, 2).eps_minus - 2.0 * eigenenergies(eff, 1).eps_minus;
}

} // namespace pblockade
