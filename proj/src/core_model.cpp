#include "pblockade/core_model.hpp"

#include "pblockade/errors.hpp"

#include <cmath>
#include <numbers>

namespace pblockade {

namespace {

void require(bool ok, const std::string& msg)
{
    if (!ok) {
        throw DomainError(msg);
    }
}

} // namespace

std::string_view to_string(Direction d)
{
    return d == Direction::Forward ? "forward" : "backward";
}

Direction toggled(Direction d)
{
    return d == Direction::Forward ? Direction::Backward : Direction::Forward;
}

SystemParams preset_params()
{
    return SystemParams{};
}

void validate(const SystemParams& p)
{
    require(p.kappa == 1.0, "kappa: the total decay rate is the unit and must equal 1");
    require(std::isfinite(p.kappa1) && p.kappa1 > 0.0, "kappa1: must be finite and > 0");
    require(std::isfinite(p.kappa2) && p.kappa2 > 0.0, "kappa2: must be finite and > 0");
    require(std::abs(p.kappa1 + p.kappa2 - 2.0 * p.kappa) <= 1e-12,
            "kappa1, kappa2: must satisfy kappa1 + kappa2 = 2 kappa");
    require(std::isfinite(p.g) && p.g >= 0.0, "g: must be finite and >= 0");
    require(std::isfinite(p.delta_p), "delta_p: must be finite");
    require(!p.delta_he || std::isfinite(*p.delta_he), "delta_he: must be finite");
    require(std::isfinite(p.delta_e), "delta_e: must be finite");
    require(std::isfinite(p.delta_c), "delta_c: must be finite");
    require(std::isfinite(p.E_he) && p.E_he >= 0.0, "E_he: must be finite and >= 0");
    require(std::isfinite(p.E_eg) && p.E_eg >= 0.0, "E_eg: must be finite and >= 0");
    require(std::isfinite(p.b_in) && p.b_in >= 0.0, "b_in: must be finite and >= 0");
    require(std::isfinite(p.phi_p) && std::isfinite(p.phi_he) && std::isfinite(p.phi_eg),
            "phi_p, phi_he, phi_eg: must be finite");
    require(!p.J || std::isfinite(*p.J), "J: must be finite");
}

std::string_view describe(RegimeWarning w)
{
    switch (w) {
    case RegimeWarning::CavityCouplingNotDetuned:
        return "large-detuning assumption violated: |delta_p/g| < 10";
    case RegimeWarning::AtomicDriveNotDetuned:
        return "large-detuning assumption violated: |delta_he/E_he| < 10";
    case RegimeWarning::CavityDriveNotWeak:
        return "weak-driving assumption violated: sqrt(kappa_i) b_in >= 0.1 kappa";
    case RegimeWarning::MicrowaveDriveNotWeak:
        return "weak-driving assumption violated: E_eg >= 0.1 kappa";
    }
    return "unknown regime warning";
}

double wrap_phase(double x)
{
    constexpr double pi = std::numbers::pi;
    double y = std::remainder(x, 2.0 * pi);
    if (y <= -pi) {
        y += 2.0 * pi;
    }
    return y;
}

double raman_coupling(const SystemParams& p)
{
    if (p.J) {
        return *p.J;
    }
    if (p.delta_p == 0.0) {
        throw DivisionByZero("delta_p: must be nonzero for adiabatic elimination");
    }
    return p.g * p.E_he / p.delta_p;
}

std::optional<double> atomic_drive_amplitude(const SystemParams& p)
{
    if (!p.J) {
        return p.E_he;
    }
    if (p.g == 0.0) {
        return std::nullopt;
    }
    return std::abs(*p.J * p.delta_p / p.g);
}

double bare_microwave_detuning(const SystemParams& p)
{
    if (p.delta_p == 0.0) {
        throw DivisionByZero("delta_p: must be nonzero for adiabatic elimination");
    }
    const double ehe = atomic_drive_amplitude(p).value_or(p.E_he);
    return p.delta_e + ehe * ehe / p.delta_p;
}

double atomic_drive_detuning(const SystemParams& p)
{
    if (p.delta_he) {
        return *p.delta_he;
    }
    return p.delta_p - bare_microwave_detuning(p);
}

double relative_phase(const SystemParams& p)
{
    return wrap_phase(p.phi_p - p.phi_he - p.phi_eg);
}

double input_drive(const SystemParams& p)
{
    const double k = p.direction == Direction::Forward ? p.kappa1 : p.kappa2;
    return std::sqrt(k) * p.b_in;
}

std::vector<RegimeWarning> check_regime(const SystemParams& p)
{
    std::vector<RegimeWarning> out;
    if (p.g > 0.0 && std::abs(p.delta_p / p.g) < 10.0) {
        out.push_back(RegimeWarning::CavityCouplingNotDetuned);
    }
    const auto ehe = atomic_drive_amplitude(p);
    if (ehe && *ehe > 0.0 && p.delta_p != 0.0
        && std::abs(atomic_drive_detuning(p) / *ehe) < 10.0) {
        out.push_back(RegimeWarning::AtomicDriveNotDetuned);
    }
    if (input_drive(p) >= 0.1) {
        out.push_back(RegimeWarning::CavityDriveNotWeak);
    }
    if (p.E_eg >= 0.1) {
        out.push_back(RegimeWarning::MicrowaveDriveNotWeak);
    }
    return out;
}

EffectiveParams derive_effective(const SystemParams& p)
{
    if (p.delta_p == 0.0) {
        throw DivisionByZero("delta_p: must be nonzero for adiabatic elimination");
    }
    EffectiveParams e;
    e.delta_c = p.delta_c;
    e.delta_e = p.delta_e;
    e.G = p.g * p.g / p.delta_p;
    e.J = raman_coupling(p);
    e.theta = relative_phase(p);
    e.omega = input_drive(p);
    e.e_eg = p.E_eg;
    const double half = 0.5 * p.kappa;
    e.M = cplx(p.delta_c - e.G, -half);
    e.N = cplx(p.delta_c + p.delta_e, -half);
    e.warnings = check_regime(p);
    return e;
}

SystemParams mirror_swap(const SystemParams& p)
{
    SystemParams s = p;
    s.kappa1 = p.kappa2;
    s.kappa2 = p.kappa1;
    s.direction = toggled(p.direction);
    return s;
}

SystemParams with_coupling(const SystemParams& p, double J, double theta)
{
    SystemParams s = p;
    s.J = J;
    s.phi_he = wrap_phase(p.phi_p - p.phi_eg - theta);
    return s;
}

double amplitude_from_power(double power_w, double omega_p)
{
    if (!(power_w >= 0.0)) {
        throw DomainError("P_in: power must be >= 0");
    }
    if (!(omega_p > 0.0)) {
        throw DomainError("omega_p: angular frequency must be > 0");
    }
    return std::sqrt(power_w / (hbar_si * omega_p));
}

double angular_frequency_from_wavelength(double wavelength_m)
{
    if (!(wavelength_m > 0.0)) {
        throw DomainError("wavelength: must be > 0");
    }
    return 2.0 * std::numbers::pi * speed_of_light_si / wavelength_m;
}

} // namespace pblockade
