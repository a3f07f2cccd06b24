#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chanqed/emission.hpp"
#include "chanqed/keyvalue.hpp"

namespace chanqed {

inline constexpr const char* library_version = "0.3.0";

/// A complete run description. Only particle.E_MeV, laser.xi and one of laser.omega0_eV /
/// laser.delta0 are mandatory; every other key has a default (see README).
struct Scenario {
    Species species = Species::positron;
    double E_MeV = 0.0;
    int s0 = 0;
    std::optional<double> E_perp_eV;
    double p_y_eV = 0.0;
    bool harmonic_ok = false;

    std::string preset = "si_planar_like";
    double U0_eV = 0.0;
    double d_angstrom = 0.0;
    double n_index = 1.0;

    std::optional<double> omega0_eV;
    std::optional<double> delta0;
    double xi = 0.0;

    std::vector<double> theta{0.0};
    std::vector<double> phi{0.0};
    std::vector<int> N;  // empty = 1..N_max
    std::vector<int> transitions{-2, -1, 0, 1, 2};

    ValidityMargins margins{};
    double dechanneling_margin = 0.1;  // N_max = floor(margin U0 / omega0)
    QuadratureOptions quadrature{};

    static Scenario from_keys(const KeyValues& kv);
    /// Every resolved field, defaults included; from_keys(to_keys()) reproduces the scenario.
    KeyValues to_keys() const;
};

Scenario load_scenario(const std::string& path, const std::vector<std::string>& overrides = {});

struct DerivedQuantities {
    double gamma;
    double E_parallel_eV;
    double E_perp_eV;
    double kappa_eV3;
    double Omega_eV;
    double omega0_eV;
    double omega_tilde0_eV;
    double delta0;
    double theta_L;
    int s_max;
    int N_max;
    double omega_max_eV;
    double nonlinearity;  // (xi / 2 delta0)^2
};

struct RunManifest {
    KeyValues scenario;
    std::string version;
    DerivedQuantities derived;
    ValidityReport validity;
    std::string timestamp;
};

/// Resolved physics objects of a scenario.
struct ScenarioModel {
    ChannelModel channel;
    ParticleState particle;
    LaserWave laser;
    ScanGrid grid;
    DerivedQuantities derived;
};

ScenarioModel build_model(const Scenario& sc);
RunManifest derive(const Scenario& sc);

struct SpectrumSummary {
    std::size_t points = 0;
    std::size_t valid = 0;
    double peak_omega = 0.0;  // largest kinematically allowed photon energy
    double peak_dW = 0.0;
    double omega_at_peak_dW = 0.0;
    double total_dW = 0.0;
};

SpectrumSummary summarize(const std::vector<SpectralPoint>& points);

std::vector<SpectralPoint> run_spectrum(const Scenario& sc, unsigned threads = 1);

enum class SweepAxis { xi, delta0, E };
SweepAxis sweep_axis_from_string(const std::string& s);

struct SweepRow {
    double value = 0.0;
    double xi = 0.0;
    double delta0 = 0.0;
    double omega0_eV = 0.0;
    double E_MeV = 0.0;
    double Omega_eV = 0.0;
    double nonlinearity = 0.0;  // (xi / 2 delta0)^2
    double enhancement = 0.0;   // nonlinearity / xi^2
    SpectrumSummary summary{};
    Verdict verdict = Verdict::pass;
    std::string error;
};

std::vector<SweepRow> sweep(const Scenario& sc, SweepAxis axis, const std::vector<double>& values,
                            unsigned threads = 1);

void write_spectrum_csv(std::ostream& os, const std::vector<SpectralPoint>& points);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);
std::string manifest_to_json(const RunManifest& m);
/// Scenario keys echoed in a manifest written by manifest_to_json.
KeyValues scenario_from_manifest_json(const std::string& text);

/// Sweep value list: "a, b, c" or "linspace(a, b, n)". Order is kept; an empty string gives
/// an empty list.
std::vector<double> parse_value_list(const std::string& text, const std::string& key);

/// Fixed 17-significant-digit scientific form used in every CSV.
std::string format_csv_double(double v);

}  // namespace chanqed
