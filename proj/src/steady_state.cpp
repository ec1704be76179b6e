#include "pblockade/steady_state.hpp"

#include "pblockade/config.hpp"
#include "pblockade/errors.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

namespace pblockade {

namespace {

struct Denominators {
    cplx single;   // J^2 - M delta_e
    cplx two;      // J^2 - M N
};

Denominators denominators(const EffectiveParams& e)
{
    const double j2 = e.J * e.J;
    return {j2 - e.M * e.delta_e, j2 - e.M * e.N};
}

} // namespace

AmplitudeState analytic_amplitudes(const EffectiveParams& e)
{
    const auto d = denominators(e);
    if (std::abs(d.single) <= singular_threshold) {
        throw SingularDenominator(SingularDenominator::Which::SingleExcitation,
                                  "analytic_amplitudes: |J^2 - M delta_e| below threshold");
    }
    if (std::abs(d.two) <= singular_threshold) {
        throw SingularDenominator(SingularDenominator::Which::TwoExcitation,
                                  "analytic_amplitudes: |J^2 - M N| below threshold");
    }
    const cplx jm = std::polar(e.J, -e.theta);
    const cplx jp = std::polar(e.J, e.theta);
    const double om = e.omega;

    AmplitudeState s;
    s.c0g = 1.0;
    s.c1g = (e.e_eg * jm + om * e.delta_e) / d.single;
    s.c0e = (e.e_eg * e.M + om * jp) / d.single;
    s.c2g = ((e.e_eg * jm + om * e.N) * s.c1g + om * jm * s.c0e) / (std::numbers::sqrt2 * d.two);
    s.c1e = ((e.e_eg * e.M + om * jp) * s.c1g + om * e.M * s.c0e) / d.two;
    return s;
}

cplx two_photon_numerator(const EffectiveParams& e)
{
    const cplx jm = std::polar(e.J, -e.theta);
    const double om = e.omega;
    const double E = e.e_eg;
    return (E * jm + om * e.N) * (E * jm + om * e.delta_e) + om * jm * E * e.M + om * om * e.J * e.J;
}

PhotonStats photon_stats(const AmplitudeState& s)
{
    if (!s.finite()) {
        throw DomainError("photon_stats: state is not finite");
    }
    PhotonStats st;
    st.norm = s.norm2();
    if (!(st.norm > 0.0)) {
        throw DomainError("photon_stats: zero state");
    }
    const double n1g = std::norm(s.c1g);
    const double n1e = std::norm(s.c1e);
    const double n2g = std::norm(s.c2g);
    st.p1 = (n1g + n1e) / st.norm;
    st.p2 = n2g / st.norm;
    st.n_cavity_paper = n1g;
    st.n_cavity_full = n1g + n1e + 2.0 * n2g;
    const double mean = st.p1 + 2.0 * st.p2;
    if (mean > 1e-30) {
        st.g2 = 2.0 * st.p2 / (mean * mean);
    }
    return st;
}

PhotonStats analytic_stats(const SystemParams& p)
{
    return photon_stats(analytic_amplitudes(derive_effective(p)));
}

DetuningSweep g2_of_detuning(const SystemParams& p, const std::vector<double>& delta_c_values)
{
    if (delta_c_values.empty()) {
        throw DomainError("g2_of_detuning: empty detuning list");
    }
    DetuningSweep out;
    out.delta_c = delta_c_values;
    out.forward.reserve(delta_c_values.size());
    out.backward.reserve(delta_c_values.size());
    for (double dc : delta_c_values) {
        if (!std::isfinite(dc)) {
            throw DomainError("g2_of_detuning: non-finite detuning");
        }
        for (Direction dir : {Direction::Forward, Direction::Backward}) {
            SystemParams q = p;
            q.delta_c = dc;
            q.direction = dir;
            std::optional<PhotonStats> st;
            try {
                st = analytic_stats(q);
            } catch (const SingularDenominator&) {
            }
            (dir == Direction::Forward ? out.forward : out.backward).push_back(st);
        }
    }
    return out;
}

void write_detuning_csv(std::ostream& os, const DetuningSweep& sweep)
{
    os << "delta_c,direction,p1,p2,g2,n_paper,n_full,valid\n";
    for (Direction dir : {Direction::Forward, Direction::Backward}) {
        const auto& col = dir == Direction::Forward ? sweep.forward : sweep.backward;
        for (std::size_t i = 0; i < sweep.delta_c.size(); ++i) {
            os << format_double(sweep.delta_c[i]) << ',' << to_string(dir) << ',';
            if (const auto& st = col[i]) {
                os << format_double(st->p1) << ',' << format_double(st->p2) << ','
                   << (st->g2 ? format_double(*st->g2) : "") << ',' << format_double(st->n_cavity_paper) << ','
                   << format_double(st->n_cavity_full) << ",1\n";
            } else {
                os << ",,,,,0\n";
            }
        }
    }
}

std::vector<double> linspace(double lo, double hi, std::size_t n)
{
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return v;
}

} // namespace pblockade
