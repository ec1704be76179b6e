#pragma once

// Physical parameters of the driven Lambda-atom / asymmetric-cavity system and
// the reduction to the effective two-ground-state model.
//
// Every rate, detuning and drive amplitude is expressed in units of the total
// cavity decay rate kappa, which is fixed to 1. b_in carries units of sqrt(kappa).

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pblockade {

using cplx = std::complex<double>;

enum class Direction { Forward, Backward };

std::string_view to_string(Direction d);
Direction toggled(Direction d);

struct SystemParams {
    double kappa = 1.0;
    double kappa1 = 0.2;   // left mirror
    double kappa2 = 1.8;   // right mirror
    double g = 10.0;
    double delta_p = 100.0;
    // Unset means the Raman-resonant value delta_p - delta_eg.
    std::optional<double> delta_he;
    double delta_e = -0.5;
    double delta_c = 0.0;
    double E_he = 0.0;
    double E_eg = 0.01;
    double b_in = 0.02;
    double phi_p = 0.0;
    double phi_he = 0.0;
    double phi_eg = 0.0;
    // Explicit Raman coupling. Takes precedence over g*E_he/delta_p.
    std::optional<double> J;
    Direction direction = Direction::Forward;

    bool operator==(const SystemParams&) const = default;
};

// Parameter set used throughout the figures: kappa1 = 0.2, kappa2 = 1.8,
// g = 10, delta_p = 100, delta_e = -0.5, b_in = 0.02, E_eg = 0.01.
SystemParams preset_params();

// Throws DomainError naming the offending field.
void validate(const SystemParams& p);

enum class RegimeWarning {
    CavityCouplingNotDetuned,   // |delta_p / g| < 10
    AtomicDriveNotDetuned,      // |delta_he / E_he| < 10
    CavityDriveNotWeak,         // omega >= 0.1
    MicrowaveDriveNotWeak,      // E_eg >= 0.1
};

std::string_view describe(RegimeWarning w);

struct EffectiveParams {
    double delta_c = 0.0;
    double delta_e = 0.0;
    double G = 0.0;
    double J = 0.0;
    double theta = 0.0;   // (-pi, pi]
    double omega = 0.0;   // sqrt(kappa_i) * b_in of the selected input port
    double e_eg = 0.0;
    cplx M;               // delta_c - i/2 - G
    cplx N;               // delta_c - i/2 + delta_e
    std::vector<RegimeWarning> warnings;
};

// Adiabatic elimination of the excited level. Throws DivisionByZero if
// delta_p == 0; regime violations are reported in `warnings`.
EffectiveParams derive_effective(const SystemParams& p);

// Large-detuning / weak-driving diagnostics without building the model.
std::vector<RegimeWarning> check_regime(const SystemParams& p);

// Raman coupling actually used: the explicit J if set, else g*E_he/delta_p.
double raman_coupling(const SystemParams& p);

// E_he consistent with the Raman coupling in use (J*delta_p/g). nullopt when g == 0.
std::optional<double> atomic_drive_amplitude(const SystemParams& p);

// Bare microwave detuning delta_eg = delta_e + E_he^2/delta_p that realises the
// requested effective detuning.
double bare_microwave_detuning(const SystemParams& p);

// |h>-level detuning from the atomic drive (explicit value or Raman resonance).
double atomic_drive_detuning(const SystemParams& p);

double relative_phase(const SystemParams& p);

// Drive amplitude sqrt(kappa_i) * b_in for the configured direction.
double input_drive(const SystemParams& p);

SystemParams mirror_swap(const SystemParams& p);

// Sets the Raman coupling explicitly and rotates phi_he so that the relative
// phase equals theta (phi_p and phi_eg unchanged).
SystemParams with_coupling(const SystemParams& p, double J, double theta);

// Wraps an angle into (-pi, pi].
double wrap_phase(double x);

// Reduced Planck constant, CODATA 2018 (exact since the SI redefinition).
inline constexpr double hbar_si = 1.054571817e-34;
inline constexpr double speed_of_light_si = 299792458.0;

// b_in = sqrt(P_in / (hbar * omega_p)) in s^-1/2. Power in W, omega_p in rad/s.
double amplitude_from_power(double power_w, double omega_p);

double angular_frequency_from_wavelength(double wavelength_m);

} // namespace pblockade
