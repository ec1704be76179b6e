#include "pblockade/config.hpp"
#include "pblockade/core_model.hpp"
#include "pblockade/errors.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

using namespace pblockade;

namespace {

bool has_warning(const EffectiveParams& e, RegimeWarning w)
{
    return std::find(e.warnings.begin(), e.warnings.end(), w) != e.warnings.end();
}

SystemParams random_params()
{
    SystemParams p;
    p.kappa1 = oracle::uniform(0.05, 1.95);
    p.kappa2 = 2.0 - p.kappa1;
    p.g = oracle::uniform(0.0, 20.0);
    p.delta_p = oracle::uniform(20.0, 300.0) * (oracle::uniform(0, 1) < 0.5 ? -1.0 : 1.0);
    p.delta_e = oracle::uniform(-2.0, 2.0);
    p.delta_c = oracle::uniform(-4.0, 4.0);
    p.E_he = oracle::uniform(0.0, 50.0);
    p.E_eg = oracle::uniform(0.0, 0.05);
    p.b_in = oracle::uniform(0.0, 0.05);
    p.phi_p = oracle::uniform(-4.0, 4.0);
    p.phi_he = oracle::uniform(-4.0, 4.0);
    p.phi_eg = oracle::uniform(-4.0, 4.0);
    return p;
}

} // namespace

TEST_CASE("effective parameters from the physical ones")
{
    SystemParams p;
    p.g = 10.0;
    p.delta_p = 100.0;
    p.E_he = 30.0;
    const auto e = derive_effective(p);
    CHECK(e.G == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(e.J == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(e.theta == 0.0);
    CHECK(e.M.imag() == -0.5);
    CHECK(e.N.imag() == -0.5);
    CHECK(e.M.real() == doctest::Approx(p.delta_c - 1.0));
    CHECK(e.N.real() == doctest::Approx(p.delta_c + p.delta_e));
}

TEST_CASE("decoupled atom gives no shift and no Raman coupling")
{
    SystemParams p;
    p.g = 0.0;
    p.E_he = 12.0;
    const auto e = derive_effective(p);
    CHECK(e.G == 0.0);
    CHECK(e.J == 0.0);
}

TEST_CASE("drive strength follows the input mirror")
{
    SystemParams p;
    CHECK(derive_effective(p).omega == doctest::Approx(0.0089443).epsilon(1e-5));
    p.direction = Direction::Backward;
    CHECK(derive_effective(p).omega == doctest::Approx(std::sqrt(1.8) * 0.02).epsilon(1e-14));
}

TEST_CASE("zero atomic detuning cannot be eliminated")
{
    SystemParams p;
    p.delta_p = 0.0;
    CHECK_THROWS_AS(derive_effective(p), DivisionByZero);
}

TEST_CASE("regime warnings")
{
    SystemParams p = preset_params();
    CHECK(derive_effective(p).warnings.empty());

    p.delta_p = 50.0;
    CHECK(has_warning(derive_effective(p), RegimeWarning::CavityCouplingNotDetuned));

    p = preset_params();
    p.b_in = 0.5;
    CHECK(has_warning(derive_effective(p), RegimeWarning::CavityDriveNotWeak));

    p = preset_params();
    p.E_eg = 0.1;
    CHECK(has_warning(derive_effective(p), RegimeWarning::MicrowaveDriveNotWeak));

    p = preset_params();
    p.E_he = 30.0;
    p.delta_he = 400.0;
    CHECK_FALSE(has_warning(derive_effective(p), RegimeWarning::AtomicDriveNotDetuned));
    p.delta_he = 200.0;
    p.E_he = 25.0;
    CHECK(has_warning(derive_effective(p), RegimeWarning::AtomicDriveNotDetuned));

    // Warnings never stop the reduction.
    CHECK(derive_effective(p).G == doctest::Approx(1.0));
    for (auto w : check_regime(p)) {
        CHECK_FALSE(describe(w).empty());
    }
}

TEST_CASE("validation rejects out-of-domain inputs")
{
    auto bad = [](auto edit) {
        SystemParams p;
        edit(p);
        return p;
    };
    CHECK_THROWS_AS(validate(bad([](SystemParams& p) { p.kappa1 = 0.5; })), DomainError);
    CHECK_THROWS_AS(validate(bad([](SystemParams& p) { p.kappa1 = 0.0; p.kappa2 = 2.0; })), DomainError);
    CHECK_THROWS_AS(validate(bad([](SystemParams& p) { p.kappa = 2.0; })), DomainError);
    CHECK_THROWS_AS(validate(bad([](SystemParams& p) { p.g = -1.0; })), DomainError);
    CHECK_THROWS_AS(validate(bad([](SystemParams& p) { p.E_eg = -0.1; })), DomainError);
    CHECK_THROWS_AS(validate(bad([](SystemParams& p) { p.b_in = NAN; })), DomainError);
    CHECK_THROWS_AS(validate(bad([](SystemParams& p) { p.delta_c = INFINITY; })), DomainError);
    CHECK_NOTHROW(validate(preset_params()));
}

TEST_CASE("explicit Raman coupling wins over the atomic drive")
{
    SystemParams p;
    p.E_he = 30.0;
    p.J = -1.5;
    CHECK(raman_coupling(p) == -1.5);
    CHECK(*atomic_drive_amplitude(p) == doctest::Approx(15.0));
    p.g = 0.0;
    CHECK_FALSE(atomic_drive_amplitude(p).has_value());
}

TEST_CASE("microwave detuning that realises the effective detuning")
{
    SystemParams p;
    p.E_he = 30.0;
    CHECK(bare_microwave_detuning(p) == doctest::Approx(-0.5 + 9.0));
    CHECK(atomic_drive_detuning(p) == doctest::Approx(100.0 - 8.5));
    p.delta_he = 42.0;
    CHECK(atomic_drive_detuning(p) == 42.0);
}

TEST_CASE("with_coupling fixes the relative phase")
{
    SystemParams p;
    p.phi_p = 0.7;
    p.phi_eg = -0.2;
    const auto q = with_coupling(p, 1.25, 2.0);
    const auto e = derive_effective(q);
    CHECK(e.J == 1.25);
    CHECK(e.theta == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("phase wrapping lands in (-pi, pi]")
{
    constexpr double pi = std::numbers::pi;
    CHECK(wrap_phase(pi) == doctest::Approx(pi));
    CHECK(wrap_phase(-pi) == doctest::Approx(pi));
    CHECK(wrap_phase(3 * pi / 2) == doctest::Approx(-pi / 2));
    for (int i = 0; i < 200; ++i) {
        const double x = oracle::uniform(-50.0, 50.0);
        const double y = wrap_phase(x);
        CHECK(y > -pi);
        CHECK(y <= pi);
        CHECK(std::abs(std::remainder(x - y, 2 * pi)) < 1e-12);
    }
}

TEST_CASE("input amplitude from optical power")
{
    const double w = angular_frequency_from_wavelength(852e-9);
    CHECK(amplitude_from_power(0.0, w) == 0.0);
    // Independent evaluation: photon flux P lambda / (2 pi hbar c).
    const double hbar = 1.054571817e-34, c = 299792458.0;
    const double expected = std::sqrt(1.16e-15 * 852e-9 / (2 * std::numbers::pi * hbar * c));
    CHECK(amplitude_from_power(1.16e-15, w) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(amplitude_from_power(1.16e-15, w) == doctest::Approx(70.5).epsilon(2e-3));
    CHECK(amplitude_from_power(4e-15, w) == doctest::Approx(2 * amplitude_from_power(1e-15, w)).epsilon(1e-14));
    CHECK_THROWS_AS(amplitude_from_power(-1e-15, w), DomainError);
    CHECK_THROWS_AS(amplitude_from_power(1e-15, 0.0), DomainError);
}

TEST_CASE("mirror swap")
{
    SystemParams p;
    const auto q = mirror_swap(p);
    CHECK(q.kappa1 == 1.8);
    CHECK(q.kappa2 == 0.2);
    CHECK(q.direction == Direction::Backward);
    CHECK(mirror_swap(q) == p);

    SystemParams s;
    s.kappa1 = s.kappa2 = 1.0;
    const auto t = mirror_swap(s);
    CHECK(t.kappa1 == 1.0);
    CHECK(t.kappa2 == 1.0);
    CHECK(t.direction == Direction::Backward);
}

TEST_CASE("properties over random parameter draws")
{
    for (int i = 0; i < 300; ++i) {
        const SystemParams p = random_params();
        // Swapping mirrors and toggling the port selects the same physical
        // mirror; either change alone selects the other one.
        CHECK(derive_effective(mirror_swap(p)).omega == derive_effective(p).omega);
        SystemParams toggled_only = p;
        toggled_only.direction = toggled(p.direction);
        SystemParams swapped_only = mirror_swap(p);
        swapped_only.direction = p.direction;
        CHECK(derive_effective(swapped_only).omega == derive_effective(toggled_only).omega);

        SystemParams shifted = p;
        const double c = oracle::uniform(-3.0, 3.0);
        shifted.phi_p += c;
        shifted.phi_he += c;
        CHECK(std::abs(std::remainder(derive_effective(shifted).theta - derive_effective(p).theta,
                                      2 * std::numbers::pi)) < 1e-12);

        const double lambda = oracle::uniform(0.2, 5.0);
        SystemParams scaled = p;
        scaled.g *= lambda;
        scaled.E_he *= lambda;
        scaled.delta_p *= lambda;
        const auto a = derive_effective(p), b = derive_effective(scaled);
        CHECK(b.G == doctest::Approx(lambda * a.G).epsilon(1e-12));
        CHECK(b.J == doctest::Approx(lambda * a.J).epsilon(1e-12));
    }
}

TEST_CASE("config text parsing")
{
    const auto s = parse_config_text("# preset\n g = 6.7  # stronger\n\nkappa1=0.3\ndirection = Backward\nE_eg = 0\n",
                                     "cfg");
    REQUIRE(s.size() == 4);
    CHECK(s[0].key == "g");
    CHECK(s[0].origin == "cfg:2");
    const auto p = apply_settings(preset_params(), s);
    CHECK(p.g == 6.7);
    CHECK(p.kappa1 == 0.3);
    CHECK(p.kappa2 == doctest::Approx(1.7));
    CHECK(p.direction == Direction::Backward);
    CHECK(p.E_eg == 0.0);
}

TEST_CASE("config errors name the field")
{
    auto message = [](const std::string& text) {
        try {
            apply_settings(preset_params(), parse_config_text(text, "f"));
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("bogus = 1\n").find("f:1: bogus") != std::string::npos);
    CHECK(message("g = ten\n").find("g") != std::string::npos);
    CHECK(message("\ng 5\n").find("f:2") != std::string::npos);
    CHECK(message("kappa1 = 0.5\nkappa2 = 0.5\n").find("kappa1") != std::string::npos);
    CHECK(message("direction = sideways\n").find("direction") != std::string::npos);
    CHECK(message("g = -1\n").find("g:") != std::string::npos);
    CHECK_THROWS_AS(read_config_file("/nonexistent/pblockade.cfg"), ConfigError);
}

TEST_CASE("config round trip")
{
    SystemParams p = random_params();
    p.J = 0.123456789012345;
    p.delta_he = 77.5;
    p.direction = Direction::Backward;
    const auto path = std::filesystem::temp_directory_path() / "pblockade_roundtrip.cfg";
    {
        std::ofstream out(path);
        out << to_config_text(p);
    }
    CHECK(apply_settings(preset_params(), read_config_file(path)) == p);
    std::filesystem::remove(path);
}
