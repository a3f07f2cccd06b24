#pragma once

#include <map>
#include <string>
#include <vector>

#include "chanqed/channel.hpp"

namespace chanqed {

// Geometry is fixed: the wave is polarized along x with phase omega0 (t + n z), so it travels
// toward -z while the beam moves toward +z with p_z > 0.

/// Linearly polarized plane wave; xi = e A0 / m.
struct LaserWave {
    double omega0;
    double xi;
    double n_index = 1.0;

    LaserWave(double omega0_eV, double xi_, double n = 1.0);
};

/// Free-particle energy and momenta used as dressing input.
struct FreeKinematics {
    double mass;
    double E;
    double p_y;
    double p_z;

    double E_parallel() const;
    static FreeKinematics of(const ParticleState& p) { return {p.mass(), p.E(), p.p_y(), p.p_z()}; }
};

/// Quasienergy and quasimomentum of a particle in the channel + wave.
struct DressedState {
    FreeKinematics free;
    double E_par;
    double p_tilde;      // E + n p_z
    double omega_tilde;  // (p_tilde / E_par) omega0
    double Omega;        // channel oscillator frequency the detuning refers to
    double delta;        // (omega_tilde - Omega) / Omega
    double Delta;        // omega_tilde^2 - Omega^2, evaluated as a product
    double shift;        // omega_tilde^2 e^2 A0^2 / (4 p_tilde Delta)
    double Pi;
    double Pi_y;
    double Pi_z;
};

/// Doppler-shifted frequency (E + n p_z) / E_par * omega0.
double doppler_shifted_frequency(const FreeKinematics& f, const LaserWave& w);
double doppler_shifted_frequency(const ParticleState& p, const LaserWave& w);

DressedState dress(const FreeKinematics& f, const LaserWave& w, double Omega);
DressedState dress(const ParticleState& p, const LaserWave& w, double Omega);

/// Recovers the free labels from a quasienergy / quasimomentum by inverting the dressing
/// relations with fixed-point iteration.
DressedState undress(double Pi, double Pi_y, double Pi_z, double mass, const LaserWave& w, double Omega);

/// omega0 that puts the initial Doppler frequency at Omega (1 + delta).
double omega0_for_detuning(const ParticleState& p, double n_index, double Omega, double delta);

struct Detuning {
    double delta;        // initial
    double delta_final;

    bool resonant(double threshold = 0.2) const;
};

enum class Verdict { pass, warn, fail };
const char* to_string(Verdict v);

/// "a << b" is read as ratio a/b <= pass_below (pass), <= fail_above (warn), else fail.
struct ValidityMargins {
    double pass_below = 0.1;
    double fail_above = 0.5;
    double resonance_pass_below = 0.2;
};

struct ValidityCondition {
    std::string name;
    std::string relation;
    double ratio;   // reported value
    bool inverted;  // ratio must be large rather than small
    Verdict verdict;
};

struct ValidityReport {
    std::vector<ValidityCondition> conditions;

    Verdict overall() const;
    const ValidityCondition& at(const std::string& name) const;
    std::string to_text() const;
    std::map<std::string, std::string> to_map() const;
};

struct ValidityInputs {
    int N_max = 1;
    double omega_max = 0.0;  // largest emitted photon energy expected in the scan
    bool harmonic_ok = false;
    ValidityMargins margins{};
};

ValidityReport check_validity(const ParticleState& p, const LaserWave& w, const ChannelModel& ch,
                              const ValidityInputs& in);

}  // namespace chanqed
