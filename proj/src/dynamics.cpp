#include "pblockade/dynamics.hpp"

#include "pblockade/config.hpp"
#include "pblockade/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace pblockade {

namespace {

using State5 = std::array<cplx, 5>;

// Coefficients of i dC/dt = H C, assembled once per integration.
struct Kernel {
    cplx M, N, two_M;
    cplx j_minus;   // J e^{-i theta}
    cplx j_plus;    // J e^{+i theta}
    double omega, sqrt2_omega, e_eg, delta_e;
    bool hold;

    Kernel(const EffectiveParams& eff, bool hold_c0g)
        : M(eff.M), N(eff.N), two_M(2.0 * eff.M),
          j_minus(std::polar(eff.J, -eff.theta)), j_plus(std::polar(eff.J, eff.theta)),
          omega(eff.omega), sqrt2_omega(std::numbers::sqrt2 * eff.omega),
          e_eg(eff.e_eg), delta_e(eff.delta_e), hold(hold_c0g)
    {
    }

    State5 operator()(const State5& c) const
    {
        constexpr double s2 = std::numbers::sqrt2;
        const cplx c0g = c[0], c1g = c[1], c0e = c[2], c2g = c[3], c1e = c[4];
        const cplx h0g = omega * c1g + e_eg * c0e;
        const cplx h1g = omega * c0g + M * c1g + sqrt2_omega * c2g - j_minus * c0e + e_eg * c1e;
        const cplx h0e = e_eg * c0g - j_plus * c1g + delta_e * c0e + omega * c1e;
        const cplx h2g = sqrt2_omega * c1g + two_M * c2g - s2 * j_minus * c1e;
        const cplx h1e = e_eg * c1g - s2 * j_plus * c2g + omega * c0e + N * c1e;
        const cplx mi(0.0, -1.0);
        return {hold ? cplx{} : mi * h0g, mi * h1g, mi * h0e, mi * h2g, mi * h1e};
    }
};

State5 axpy(const State5& y, double a, const State5& k)
{
    State5 r;
    for (std::size_t i = 0; i < 5; ++i) {
        r[i] = y[i] + a * k[i];
    }
    return r;
}

State5 step(const Kernel& f, const State5& y, double dt)
{
    const State5 k1 = f(y);
    const State5 k2 = f(axpy(y, 0.5 * dt, k1));
    const State5 k3 = f(axpy(y, 0.5 * dt, k2));
    const State5 k4 = f(axpy(y, dt, k3));
    State5 r;
    for (std::size_t i = 0; i < 5; ++i) {
        r[i] = y[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return r;
}

bool all_finite(const State5& c)
{
    return std::all_of(c.begin(), c.end(),
                       [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

} // namespace

double AmplitudeState::norm2() const
{
    return std::norm(c0g) + std::norm(c1g) + std::norm(c0e) + std::norm(c2g) + std::norm(c1e);
}

bool AmplitudeState::finite() const
{
    return all_finite(amplitudes()) && std::isfinite(t);
}

AmplitudeState AmplitudeState::from_amplitudes(const std::array<cplx, 5>& a, double t)
{
    return {a[0], a[1], a[2], a[3], a[4], t};
}

AmplitudeDerivative rhs(const AmplitudeState& s, const EffectiveParams& eff, bool hold_c0g)
{
    return Kernel(eff, hold_c0g)(s.amplitudes());
}

void IntegratorConfig::validate() const
{
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw DomainError("dt: must be > 0");
    }
    if (!(ss_window > 0.0) || !(t_max >= ss_window) || !std::isfinite(t_max)) {
        throw DomainError("t_max, ss_window: need t_max >= ss_window > 0");
    }
    if (!(ss_tol > 0.0)) {
        throw DomainError("ss_tol: must be > 0");
    }
    if (sample_every == 0) {
        throw DomainError("sample_every: must be >= 1");
    }
}

AmplitudeState rk4_step(const AmplitudeState& s, const EffectiveParams& eff, double dt, bool hold_c0g)
{
    return AmplitudeState::from_amplitudes(step(Kernel(eff, hold_c0g), s.amplitudes(), dt), s.t + dt);
}

Trajectory evolve(const AmplitudeState& initial, const EffectiveParams& eff, const IntegratorConfig& cfg)
{
    cfg.validate();
    if (!initial.finite() || std::abs(initial.norm2() - 1.0) > 1e-6) {
        throw DomainError("evolve: initial state must be finite and normalized");
    }

    const Kernel f(eff, cfg.hold_c0g);
    const auto n_steps = static_cast<std::size_t>(std::llround(cfg.t_max / cfg.dt));
    const auto window = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.ss_window / cfg.dt)));

    Trajectory traj;
    traj.states.push_back(initial);
    State5 y = initial.amplitudes();
    State5 snapshot = y;
    std::size_t k = 0;
    while (k < n_steps) {
        y = step(f, y, cfg.dt);
        ++k;
        if (!all_finite(y)) {
            throw NonFiniteState("evolve: non-finite amplitude at t = " + format_double(initial.t + k * cfg.dt)
                                 + " (step size too large?)");
        }
        const bool at_window = k % window == 0;
        if (at_window) {
            double worst = 0.0;
            for (std::size_t i = 0; i < 5; ++i) {
                worst = std::max(worst, std::abs(y[i] - snapshot[i]) / (std::abs(y[i]) + 1e-12));
            }
            snapshot = y;
            if (worst < cfg.ss_tol) {
                traj.steady = true;
                break;
            }
        }
        if (k % cfg.sample_every == 0 && k < n_steps) {
            traj.states.push_back(AmplitudeState::from_amplitudes(y, initial.t + k * cfg.dt));
        }
    }
    traj.steps = k;
    const double t_end = initial.t + k * cfg.dt;
    if (traj.states.back().t != t_end) {
        traj.states.push_back(AmplitudeState::from_amplitudes(y, t_end));
    }
    return traj;
}

AmplitudeState stationary_state(const EffectiveParams& eff)
{
    const Kernel f(eff, true);
    State5 base{};
    base[0] = 1.0;
    const State5 source = f(base);
    // Linear system on (c1g, c0e, c2g, c1e) with the held c0g as forcing.
    std::array<std::array<cplx, 5>, 4> a{};
    for (std::size_t k = 0; k < 4; ++k) {
        State5 probe = base;
        probe[k + 1] = 1.0;
        const State5 col = f(probe);
        for (std::size_t r = 0; r < 4; ++r) {
            a[r][k] = col[r + 1] - source[r + 1];
        }
    }
    for (std::size_t r = 0; r < 4; ++r) {
        a[r][4] = -source[r + 1];
    }
    for (std::size_t c = 0; c < 4; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < 4; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) {
                piv = r;
            }
        }
        if (!(std::abs(a[piv][c]) > 1e-300)) {
            throw NumericalError("stationary_state: singular amplitude equations");
        }
        std::swap(a[piv], a[c]);
        for (std::size_t r = c + 1; r < 4; ++r) {
            const cplx m = a[r][c] / a[c][c];
            for (std::size_t k = c; k < 5; ++k) {
                a[r][k] -= m * a[c][k];
            }
        }
    }
    State5 y = base;
    for (std::size_t r = 4; r-- > 0;) {
        cplx s = a[r][4];
        for (std::size_t k = r + 1; k < 4; ++k) {
            s -= a[r][k] * y[k + 1];
        }
        y[r + 1] = s / a[r][r];
    }
    if (!all_finite(y)) {
        throw NonFiniteState("stationary_state: non-finite solution");
    }
    return AmplitudeState::from_amplitudes(y);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj)
{
    os << "t,re_c0g,im_c0g,re_c1g,im_c1g,re_c0e,im_c0e,re_c2g,im_c2g,re_c1e,im_c1e,norm2\n";
    for (const auto& s : traj.states) {
        os << format_double(s.t);
        for (const cplx& z : s.amplitudes()) {
            os << ',' << format_double(z.real()) << ',' << format_double(z.imag());
        }
        os << ',' << format_double(s.norm2()) << '\n';
    }
}

} // namespace pblockade
