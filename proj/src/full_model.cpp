#include "pblockade/full_model.hpp"

#include "pblockade/config.hpp"
#include "pblockade/dynamics.hpp"
#include "pblockade/errors.hpp"
#include "pblockade/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace pblockade {

namespace {

constexpr double reference_pump = 1000.0;
constexpr double reference_e = 200.0;

// One off-diagonal entry coefficient * exp(i frequency t) linking col -> row.
struct Coupling {
    std::size_t row, col;
    cplx coefficient;
    int phase;   // 0: static, 1: exp(-i delta_p t), 2: exp(+i (delta_he + delta_eg) t), negative for conjugates
};

class FullKernel {
public:
    FullKernel(const FullModelParams& fp, bool hold) : hold_(hold), dim_(fp.dimension())
    {
        const double omega = std::sqrt(fp.direction == Direction::Forward ? fp.kappa1 : fp.kappa2) * fp.b_in;
        const double dc = fp.delta_c();
        const double deg = fp.delta_eg();
        freq_cavity_ = -fp.delta_p();
        freq_drive_ = fp.delta_he() + deg;

        diag_.resize(dim_);
        for (int n = 0; n <= fp.n_max; ++n) {
            const cplx photon(n * dc, -0.5 * fp.kappa * n);
            diag_[full_index(n, 0)] = photon;
            diag_[full_index(n, 1)] = photon + deg;
            diag_[full_index(n, 2)] = photon;
        }
        auto add = [&](std::size_t r, std::size_t c, cplx coef, int phase) {
            if (coef != cplx{}) {
                links_.push_back({r, c, coef, phase});
                links_.push_back({c, r, std::conj(coef), -phase});
            }
        };
        const cplx pump = std::polar(omega, fp.phi_p);
        for (int n = 0; n <= fp.n_max; ++n) {
            if (n < fp.n_max) {
                const double s = std::sqrt(n + 1.0);
                add(full_index(n + 1, 0), full_index(n, 2), fp.g * s, 1);
                for (int a = 0; a < 3; ++a) {
                    add(full_index(n + 1, a), full_index(n, a), pump * s, 0);
                }
            }
            add(full_index(n, 2), full_index(n, 1), std::polar(fp.E_he, fp.phi_he), 2);
            add(full_index(n, 1), full_index(n, 0), std::polar(fp.E_eg, fp.phi_eg), 0);
        }
    }

    void operator()(const FullState& c, double t, FullState& out) const
    {
        const cplx ph1 = std::polar(1.0, freq_cavity_ * t);
        const cplx ph2 = std::polar(1.0, freq_drive_ * t);
        for (std::size_t i = 0; i < dim_; ++i) {
            out[i] = diag_[i] * c[i];
        }
        for (const auto& l : links_) {
            cplx f = l.coefficient;
            switch (l.phase) {
            case 1: f *= ph1; break;
            case -1: f *= std::conj(ph1); break;
            case 2: f *= ph2; break;
            case -2: f *= std::conj(ph2); break;
            default: break;
            }
            out[l.row] += f * c[l.col];
        }
        const cplx mi(0.0, -1.0);
        for (auto& z : out) {
            z *= mi;
        }
        if (hold_) {
            out[0] = {};
        }
    }

    std::size_t dim() const { return dim_; }

private:
    bool hold_;
    std::size_t dim_;
    double freq_cavity_ = 0.0;
    double freq_drive_ = 0.0;
    std::vector<cplx> diag_;
    std::vector<Coupling> links_;
};

class Stepper {
public:
    Stepper(const FullKernel& f) : f_(f), k1_(f.dim()), k2_(f.dim()), k3_(f.dim()), k4_(f.dim()), tmp_(f.dim()) {}

    void step(FullState& y, double t, double dt)
    {
        const std::size_t n = y.size();
        f_(y, t, k1_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * dt * k1_[i];
        f_(tmp_, t + 0.5 * dt, k2_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * dt * k2_[i];
        f_(tmp_, t + 0.5 * dt, k3_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + dt * k3_[i];
        f_(tmp_, t + dt, k4_);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] += (dt / 6.0) * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
        }
        for (const auto& z : y) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                throw NonFiniteState("full model: non-finite amplitude at t = " + format_double(t + dt));
            }
        }
    }

private:
    const FullKernel& f_;
    FullState k1_, k2_, k3_, k4_, tmp_;
};

// Unnormalised sums sum |C|^2, sum n |C_n|^2, sum n(n-1) |C_n|^2 and the per-n weights.
struct Moments {
    std::vector<double> weight;
    double total = 0.0;

    void add(const FullState& c, int n_max)
    {
        weight.resize(static_cast<std::size_t>(n_max + 1), 0.0);
        for (int n = 0; n <= n_max; ++n) {
            double w = 0.0;
            for (int a = 0; a < 3; ++a) {
                w += std::norm(c[full_index(n, a)]);
            }
            weight[static_cast<std::size_t>(n)] += w;
            total += w;
        }
    }
};

double relative_change(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

} // namespace

void FullModelParams::validate() const
{
    const double vals[] = {kappa, kappa1, kappa2, omega_c, omega_e, omega_h, omega_p, omega_he, omega_eg,
                           g, E_he, E_eg, b_in, phi_p, phi_he, phi_eg};
    for (double v : vals) {
        if (!std::isfinite(v)) {
            throw DomainError("full model: every frequency, rate and drive must be finite");
        }
    }
    if (!(kappa1 > 0.0) || !(kappa2 > 0.0)) {
        throw DomainError("kappa1, kappa2: must be > 0");
    }
    if (g < 0.0 || E_he < 0.0 || E_eg < 0.0 || b_in < 0.0) {
        throw DomainError("g, E_he, E_eg, b_in: must be >= 0");
    }
    if (n_max < 1 || n_max > 4) {
        throw DomainError("n_max: must be in [1, 4]");
    }
}

FullModelParams FullModelParams::from_system(const SystemParams& p, int n_max)
{
    pblockade::validate(p);
    if (p.delta_p == 0.0) {
        throw DivisionByZero("delta_p: must be nonzero");
    }
    FullModelParams fp;
    fp.kappa = p.kappa;
    fp.kappa1 = p.kappa1;
    fp.kappa2 = p.kappa2;
    fp.g = p.g;
    fp.E_eg = p.E_eg;
    fp.b_in = p.b_in;
    fp.phi_p = p.phi_p;
    fp.phi_he = p.phi_he;
    fp.phi_eg = p.phi_eg;
    fp.direction = p.direction;
    fp.n_max = n_max;

    if (p.J) {
        if (p.g == 0.0) {
            if (*p.J != 0.0) {
                throw DomainError("J: a nonzero Raman coupling needs g > 0 in the full model");
            }
            fp.E_he = 0.0;
        } else {
            const double signed_drive = *p.J * p.delta_p / p.g;
            fp.E_he = std::abs(signed_drive);
            if (signed_drive < 0.0) {
                fp.phi_he = wrap_phase(fp.phi_he + std::numbers::pi);
            }
        }
    } else {
        fp.E_he = p.E_he;
    }

    const double delta_eg = p.delta_e + fp.E_he * fp.E_he / p.delta_p;
    const double delta_he = p.delta_p - delta_eg;
    fp.omega_p = reference_pump;
    fp.omega_c = reference_pump + p.delta_c;
    fp.omega_h = reference_pump + p.delta_p;
    fp.omega_e = reference_e;
    fp.omega_eg = fp.omega_e - delta_eg;
    fp.omega_he = fp.omega_h - fp.omega_e - delta_he;
    fp.validate();
    return fp;
}

FullState full_vacuum(const FullModelParams& fp)
{
    FullState s(fp.dimension());
    s[0] = 1.0;
    return s;
}

FullState full_rhs(const FullState& state, double t, const FullModelParams& fp, bool hold_vacuum)
{
    fp.validate();
    if (state.size() != fp.dimension()) {
        throw DomainError("full_rhs: state size must be 3 (n_max + 1)");
    }
    FullState out(state.size());
    FullKernel(fp, hold_vacuum)(state, t, out);
    return out;
}

void FullIntegratorConfig::validate() const
{
    if (!(dt > 0.0) || !(checkpoint > 0.0) || !(transient >= 0.0) || !(t_max > transient) || !(ss_tol > 0.0)
        || !std::isfinite(t_max)) {
        throw DomainError("full integrator: need dt, checkpoint, ss_tol > 0 and t_max > transient >= 0");
    }
}

FullSteadyState full_steady_state(const FullModelParams& fp, const FullIntegratorConfig& cfg)
{
    fp.validate();
    cfg.validate();
    const FullKernel f(fp, cfg.hold_vacuum);
    Stepper stepper(f);

    // Slowest explicit phase; both vanish only when nothing rotates.
    double slowest = 0.0;
    for (double w : {std::abs(fp.delta_p()), std::abs(fp.delta_he() + fp.delta_eg())}) {
        if (w > 0.0 && (slowest == 0.0 || w < slowest)) {
            slowest = w;
        }
    }
    const double period = slowest > 0.0 ? 2.0 * std::numbers::pi / slowest : cfg.checkpoint;
    const auto window_steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(period / cfg.dt)));
    const auto gap_steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.checkpoint / cfg.dt)));
    const auto transient_steps = static_cast<std::size_t>(std::llround(cfg.transient / cfg.dt));
    const auto total_steps = static_cast<std::size_t>(std::llround(cfg.t_max / cfg.dt));

    FullState y = full_vacuum(fp);
    std::size_t k = 0;
    auto advance = [&](std::size_t steps) {
        for (std::size_t i = 0; i < steps; ++i, ++k) {
            stepper.step(y, k * cfg.dt, cfg.dt);
        }
    };

    FullSteadyState out;
    out.window = window_steps * cfg.dt;
    advance(transient_steps);
    std::optional<Moments> previous;
    out.last_change = 1.0;
    while (true) {
        Moments m;
        for (std::size_t i = 0; i < window_steps; ++i) {
            stepper.step(y, k * cfg.dt, cfg.dt);
            ++k;
            m.add(y, fp.n_max);
        }
        if (previous) {
            double change = relative_change(m.total, previous->total);
            for (std::size_t n = 1; n < m.weight.size(); ++n) {
                change = std::max(change, relative_change(m.weight[n], previous->weight[n]));
            }
            out.last_change = change;
        }
        previous = m;
        if (out.last_change < cfg.ss_tol) {
            out.settled = true;
            break;
        }
        if (k + gap_steps + window_steps > total_steps) {
            break;
        }
        advance(gap_steps);
    }

    const Moments& m = *previous;
    out.t_end = k * cfg.dt;
    out.norm = m.total / static_cast<double>(window_steps);
    out.photon_distribution.resize(m.weight.size());
    double first = 0.0;
    double second = 0.0;
    for (std::size_t n = 0; n < m.weight.size(); ++n) {
        const double pn = m.weight[n] / m.total;
        out.photon_distribution[n] = pn;
        first += static_cast<double>(n) * pn;
        second += static_cast<double>(n * (n - 1)) * pn;
    }
    if (first * first > 1e-30) {
        out.g2 = second / (first * first);
    }
    return out;
}

std::vector<std::pair<double, FullState>> full_trajectory(const FullModelParams& fp, double dt, double t_max,
                                                          bool hold_vacuum, std::size_t sample_every)
{
    fp.validate();
    if (!(dt > 0.0) || !(t_max >= 0.0) || sample_every == 0) {
        throw DomainError("full_trajectory: need dt > 0, t_max >= 0, sample_every >= 1");
    }
    const FullKernel f(fp, hold_vacuum);
    Stepper stepper(f);
    const auto steps = static_cast<std::size_t>(std::llround(t_max / dt));
    FullState y = full_vacuum(fp);
    std::vector<std::pair<double, FullState>> out{{0.0, y}};
    for (std::size_t k = 0; k < steps; ++k) {
        stepper.step(y, k * dt, dt);
        if ((k + 1) % sample_every == 0 || k + 1 == steps) {
            out.emplace_back((k + 1) * dt, y);
        }
    }
    return out;
}

ValidationReport validate_effective(const SystemParams& p, double tolerance, int n_max,
                                    const FullIntegratorConfig& cfg)
{
    if (!(tolerance > 0.0)) {
        throw DomainError("tolerance: must be > 0");
    }
    const FullModelParams fp = FullModelParams::from_system(p, n_max);
    ValidationReport r;
    r.tolerance = tolerance;
    r.n_max = n_max;
    r.regime_ok = p.g == 0.0 || std::abs(p.delta_p / p.g) > 5.0;

    const FullSteadyState full = full_steady_state(fp, cfg);
    if (!full.settled && full.last_change > tolerance / 10.0) {
        throw NotConverged("full model: averaging windows still differ by " + format_double(full.last_change)
                           + " at t = " + format_double(full.t_end));
    }
    if (!full.g2) {
        throw NotConverged("full model: no photonic occupation, g2 undefined");
    }
    r.g2_full = *full.g2;
    r.t_full = full.t_end;

    const EffectiveParams eff = derive_effective(p);
    const auto eff_g2 = photon_stats(stationary_state(eff)).g2;
    if (!eff_g2) {
        throw NotConverged("effective model: no photonic occupation, g2 undefined");
    }
    r.g2_effective = *eff_g2;
    try {
        r.g2_analytic = photon_stats(analytic_amplitudes(eff)).g2;
    } catch (const SingularDenominator&) {
    }
    r.rel_diff = std::abs(r.g2_full - r.g2_effective) / r.g2_effective;
    r.pass = r.rel_diff < tolerance;
    return r;
}

void write_report(std::ostream& os, const ValidationReport& r)
{
    os << "g2_full=" << format_double(r.g2_full) << '\n'
       << "g2_effective=" << format_double(r.g2_effective) << '\n'
       << "g2_analytic=" << (r.g2_analytic ? format_double(*r.g2_analytic) : std::string()) << '\n'
       << "rel_diff=" << format_double(r.rel_diff) << '\n'
       << "tolerance=" << format_double(r.tolerance) << '\n'
       << "pass=" << (r.pass ? "true" : "false") << '\n'
       << "regime_ok=" << (r.regime_ok ? "true" : "false") << '\n'
       << "n_max=" << r.n_max << '\n'
       << "t_full=" << format_double(r.t_full) << '\n';
}

} // namespace pblockade
