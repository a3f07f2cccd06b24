#include "chanqed/channel.hpp"

#include <cmath>
#include <string>

#include "chanqed/keyvalue.hpp"

namespace chanqed {

ChannelModel::ChannelModel(Energy well_depth, InverseEnergy spacing, double refractive_index)
    : U0_(well_depth.value()), d_(spacing.value()), n_(refractive_index) {
    if (!(U0_ > 0.0) || !std::isfinite(U0_)) throw DomainError("channel: U0 must be positive");
    if (!(d_ > 0.0) || !std::isfinite(d_)) throw DomainError("channel: d must be positive");
    if (!(n_ >= 1.0) || !std::isfinite(n_)) throw DomainError("channel: refractive index must be >= 1");
    kappa_ = 2.0 * U0_ / (d_ * d_);
}

std::string_view to_string(Species s) { return s == Species::positron ? "positron" : "electron"; }

Species species_from_string(std::string_view name) {
    if (name == "positron") return Species::positron;
    if (name == "electron") return Species::electron;
    throw ConfigError("particle.species: expected positron or electron, got '" + std::string(name) + "'");
}

ParticleState::ParticleState(Species species, double E, double p_z, double p_y, int s0)
    : species_(species),
      mass_(constants::electron_mass),
      charge_sign_(species == Species::positron ? 1 : -1),
      E_(E),
      p_z_(p_z),
      p_y_(p_y),
      E_par_(std::hypot(p_z, constants::electron_mass)),
      s0_(s0) {
    if (!std::isfinite(E) || !std::isfinite(p_z) || !std::isfinite(p_y)) {
        throw DomainError("particle: non-finite kinematics");
    }
    if (s0 < 0) throw DomainError("particle: negative level index");
    // Allow rounding at the last ulp when E_perp = 0.
    if (E_ < E_par_ && E_par_ - E_ <= 4e-16 * E_par_) E_ = E_par_;
    if (!(E_ >= E_par_)) throw DomainError("particle: E below E_parallel");
}

ParticleState ParticleState::with_transverse_energy(Species species, double E, double E_perp, int s0,
                                                    double p_y) {
    if (!(E_perp >= 0.0)) throw DomainError("particle: negative transverse energy");
    const double m = constants::electron_mass;
    const double E_par = E - E_perp;
    if (!(E_par >= m)) throw DomainError("particle: E - E_perp below rest mass");
    const double p_z = std::sqrt((E_par - m) * (E_par + m));
    return ParticleState(species, E, p_z, p_y, s0);
}

ParticleState ParticleState::on_level(const ChannelModel& ch, Species species, double E, int s0) {
    if (s0 < 0) throw DomainError("particle: negative level index");
    if (!(E > constants::electron_mass)) throw DomainError("particle: total energy below rest mass");
    double E_par = E;
    for (int it = 0; it < 100; ++it) {
        const double next = E - level_energy(oscillator_frequency(ch, E_par), s0);
        if (next == E_par) break;
        E_par = next;
    }
    return with_transverse_energy(species, E, E - E_par, s0);
}

double oscillator_frequency(const ChannelModel& ch, double E_parallel) {
    if (!(E_parallel > 0.0)) throw DomainError("oscillator_frequency: E_parallel must be positive");
    return std::sqrt(ch.kappa() / E_parallel);
}

double oscillator_frequency(const ChannelModel& ch, const ParticleState& p) {
    return oscillator_frequency(ch, p.E_parallel());
}

double level_energy(double Omega, int s) {
    if (s < 0) throw DomainError("level_energy: negative level index");
    return Omega * (s + 0.5);
}

double level_energy(const ChannelModel& ch, const ParticleState& p, int s) {
    return level_energy(oscillator_frequency(ch, p), s);
}

double lindhard_angle(const ChannelModel& ch, const ParticleState& p) { return std::sqrt(2.0 * ch.U0() / p.E()); }

int max_level(double U0, double Omega) {
    if (!(Omega > 0.0)) throw DomainError("max_level: Omega must be positive");
    if (!(Omega < U0)) throw DomainError("max_level: no bound levels (Omega >= U0)");
    auto s = static_cast<int>(std::floor(U0 / Omega - 0.5));
    // floor can land one off at exact boundaries
    while (Omega * (s + 1 + 0.5) <= U0) ++s;
    while (s > 0 && Omega * (s + 0.5) > U0) --s;
    return s;
}

int max_level(const ChannelModel& ch, const ParticleState& p) { return max_level(ch.U0(), oscillator_frequency(ch, p)); }

ChannelPreset parse_preset(std::string_view text, std::string_view fallback_name) {
    auto kv = parse_key_values(text, fallback_name.empty() ? "<preset>" : fallback_name);
    ChannelPreset p;
    p.name = std::string(fallback_name);
    for (const auto& [k, v] : kv) {
        if (k == "name") p.name = v;
        else if (k == "note") p.note = v;
        else if (k == "U0_eV") p.U0_eV = parse_double(v, k);
        else if (k == "d_angstrom") p.d_angstrom = parse_double(v, k);
        else if (k == "n_index") p.n_index = parse_double(v, k);
        else throw ConfigError("preset: unknown key '" + k + "'");
    }
    if (!kv.count("U0_eV")) throw ConfigError("preset: U0_eV required");
    if (!kv.count("d_angstrom")) throw ConfigError("preset: d_angstrom required");
    try {
        (void)p.model();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("preset '") + p.name + "': " + e.what());
    }
    return p;
}

ChannelPreset load_preset_file(const std::string& path) {
    auto kv = read_key_values_file(path);
    auto stem = path.substr(path.find_last_of('/') + 1);
    stem = stem.substr(0, stem.find('.'));
    return parse_preset(format_key_values(kv), stem);
}

}  // namespace chanqed
