#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "chanqed/units.hpp"

namespace chanqed {

/// Planar channel with harmonic averaged potential U(x) = kappa x^2 / 2, kappa = 2 U0 / d^2.
class ChannelModel {
public:
    ChannelModel(Energy well_depth, InverseEnergy spacing, double refractive_index = 1.0);

    static ChannelModel from_angstrom(double U0_eV, double d_angstrom, double refractive_index = 1.0) {
        return ChannelModel(eV(U0_eV), length_from_angstrom(d_angstrom), refractive_index);
    }

    double U0() const { return U0_; }
    double d() const { return d_; }
    double kappa() const { return kappa_; }
    double refractive_index() const { return n_; }

private:
    double U0_;
    double d_;
    double kappa_;
    double n_;
};

enum class Species { positron, electron };

std::string_view to_string(Species s);
Species species_from_string(std::string_view name);

/// Free-particle labels of a channeled particle. E_parallel = sqrt(p_z^2 + m^2) and
/// E - E_parallel is the transverse energy.
class ParticleState {
public:
    ParticleState(Species species, double E, double p_z, double p_y = 0.0, int s0 = 0);

    /// Particle with a prescribed transverse energy.
    static ParticleState with_transverse_energy(Species species, double E, double E_perp, int s0 = 0,
                                                double p_y = 0.0);

    /// Particle sitting on level s0 of the channel; E_perp = Omega (s0 + 1/2) solved
    /// self-consistently with Omega = sqrt(kappa / E_parallel).
    static ParticleState on_level(const ChannelModel& ch, Species species, double E, int s0);

    Species species() const { return species_; }
    double mass() const { return mass_; }
    int charge_sign() const { return charge_sign_; }
    double E() const { return E_; }
    double p_z() const { return p_z_; }
    double p_y() const { return p_y_; }
    double E_parallel() const { return E_par_; }
    double E_perp() const { return E_ - E_par_; }
    int s0() const { return s0_; }
    double gamma() const { return lorentz_gamma(E_, mass_); }

private:
    Species species_;
    double mass_;
    int charge_sign_;
    double E_;
    double p_z_;
    double p_y_;
    double E_par_;
    int s0_;
};

double oscillator_frequency(const ChannelModel& ch, const ParticleState& p);
double oscillator_frequency(const ChannelModel& ch, double E_parallel);

/// Omega (s + 1/2).
double level_energy(double Omega, int s);
double level_energy(const ChannelModel& ch, const ParticleState& p, int s);

double lindhard_angle(const ChannelModel& ch, const ParticleState& p);

/// Largest s with Omega (s + 1/2) <= U0. Throws DomainError when no level is bound.
int max_level(double U0, double Omega);
int max_level(const ChannelModel& ch, const ParticleState& p);

struct ChannelPreset {
    std::string name;
    double U0_eV = 0.0;
    double d_angstrom = 0.0;
    double n_index = 1.0;
    std::string note;

    ChannelModel model() const { return ChannelModel::from_angstrom(U0_eV, d_angstrom, n_index); }
};

/// Parses a preset file body (keys U0_eV, d_angstrom, n_index; optional name, note).
ChannelPreset parse_preset(std::string_view text, std::string_view fallback_name = "");
ChannelPreset load_preset_file(const std::string& path);

/// Presets compiled in from data/presets.
const std::vector<ChannelPreset>& builtin_presets();
const ChannelPreset& find_preset(std::string_view name);

}  // namespace chanqed
