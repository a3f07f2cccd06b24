#include "chanqed/laser.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "chanqed/keyvalue.hpp"

namespace chanqed {

LaserWave::LaserWave(double omega0_eV, double xi_, double n) : omega0(omega0_eV), xi(xi_), n_index(n) {
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw DomainError("laser: omega0 must be positive");
    if (!(xi >= 0.0) || !std::isfinite(xi)) throw DomainError("laser: xi must be non-negative");
    if (!(n_index >= 1.0) || !std::isfinite(n_index)) throw DomainError("laser: refractive index must be >= 1");
}

double FreeKinematics::E_parallel() const { return std::hypot(p_z, mass); }

double doppler_shifted_frequency(const FreeKinematics& f, const LaserWave& w) {
    return (f.E + w.n_index * f.p_z) / f.E_parallel() * w.omega0;
}

double doppler_shifted_frequency(const ParticleState& p, const LaserWave& w) {
    return doppler_shifted_frequency(FreeKinematics::of(p), w);
}

DressedState dress(const FreeKinematics& f, const LaserWave& w, double Omega) {
    if (!(Omega >= 0.0)) throw DomainError("dress: Omega must be non-negative");
    DressedState ds{};
    ds.free = f;
    ds.E_par = f.E_parallel();
    ds.p_tilde = f.E + w.n_index * f.p_z;
    ds.omega_tilde = ds.p_tilde / ds.E_par * w.omega0;
    ds.Omega = Omega;
    const double diff = ds.omega_tilde - Omega;
    ds.delta = Omega > 0.0 ? diff / Omega : std::numeric_limits<double>::infinity();
    ds.Delta = diff * (ds.omega_tilde + Omega);
    ds.shift = 0.0;
    if (w.xi > 0.0) {
        if (ds.Delta == 0.0) {
            throw DomainError("dress: on-pole dressing (Doppler frequency equals Omega); use detuned inputs");
        }
        const double eA0_sq = w.xi * w.xi * f.mass * f.mass;
        ds.shift = ds.omega_tilde * ds.omega_tilde * eA0_sq / (4.0 * ds.p_tilde * ds.Delta);
    }
    ds.Pi = f.E + ds.shift;
    ds.Pi_y = f.p_y;
    ds.Pi_z = f.p_z - w.n_index * ds.shift;
    return ds;
}

DressedState dress(const ParticleState& p, const LaserWave& w, double Omega) {
    return dress(FreeKinematics::of(p), w, Omega);
}

DressedState undress(double Pi, double Pi_y, double Pi_z, double mass, const LaserWave& w, double Omega) {
    double shift = 0.0;
    for (int it = 0; it < 200; ++it) {
        FreeKinematics f{mass, Pi - shift, Pi_y, Pi_z + w.n_index * shift};
        DressedState ds = dress(f, w, Omega);
        const double step = std::abs(ds.shift - shift);
        if (step <= 1e-17 * std::abs(Pi) || ds.shift == shift) {
            ds.Pi = Pi;
            ds.Pi_y = Pi_y;
            ds.Pi_z = Pi_z;
            return ds;
        }
        shift = ds.shift;
    }
    throw NumericError("undress: quasimomentum inversion did not converge (too close to resonance?)");
}

double omega0_for_detuning(const ParticleState& p, double n_index, double Omega, double delta) {
    if (!(delta > -1.0) || !std::isfinite(delta)) throw DomainError("detuning must exceed -1");
    if (!(Omega > 0.0)) throw DomainError("Omega must be positive");
    return Omega * (1.0 + delta) * p.E_parallel() / (p.E() + n_index * p.p_z());
}

bool Detuning::resonant(double threshold) const {
    return std::abs(delta) < threshold && std::abs(delta_final) < threshold;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::warn: return "warn";
        case Verdict::fail: return "fail";
    }
    return "?";
}

Verdict ValidityReport::overall() const {
    Verdict worst = Verdict::pass;
    for (const auto& c : conditions) worst = std::max(worst, c.verdict);
    return worst;
}

const ValidityCondition& ValidityReport::at(const std::string& name) const {
    for (const auto& c : conditions) {
        if (c.name == name) return c;
    }
    throw DomainError("no validity condition named '" + name + "'");
}

std::string ValidityReport::to_text() const {
    std::string out;
    char buf[256];
    for (const auto& c : conditions) {
        std::snprintf(buf, sizeof buf, "%-26s %-30s %12.4e  %s\n", c.name.c_str(), c.relation.c_str(), c.ratio,
                      to_string(c.verdict));
        out += buf;
    }
    out += std::string("overall: ") + to_string(overall()) + "\n";
    return out;
}

std::map<std::string, std::string> ValidityReport::to_map() const {
    std::map<std::string, std::string> m;
    for (const auto& c : conditions) {
        m[c.name + ".ratio"] = format_double(c.ratio);
        m[c.name + ".verdict"] = to_string(c.verdict);
    }
    m["overall"] = to_string(overall());
    return m;
}

namespace {

constexpr double boundary_slack = 1 + 1e-9;

Verdict grade(double small, double pass_below, double fail_above) {
    if (std::isnan(small)) return Verdict::fail;
    if (small <= pass_below * boundary_slack) return Verdict::pass;
    if (small <= fail_above * boundary_slack) return Verdict::warn;
    return Verdict::fail;
}

ValidityCondition small_ratio(std::string name, std::string relation, double ratio, double pass_below,
                              double fail_above) {
    return {std::move(name), std::move(relation), ratio, false, grade(std::abs(ratio), pass_below, fail_above)};
}

}  // namespace

ValidityReport check_validity(const ParticleState& p, const LaserWave& w, const ChannelModel& ch,
                              const ValidityInputs& in) {
    const auto& mg = in.margins;
    const double E = p.E();
    const double m = p.mass();
    const double gamma_sq = (E / m) * (E / m);
    const double E_perp = p.E_perp();
    const double Omega = oscillator_frequency(ch, p);
    const double omega_t0 = doppler_shifted_frequency(p, w);
    const double delta0 = (omega_t0 - Omega) / Omega;

    const double absorbed = std::max(in.N_max, 0) * w.omega0;
    const double dE = std::max(in.omega_max, absorbed);
    const double dE_perp = dE / gamma_sq;

    // Final Doppler frequency after forward emission of omega_max with N_max photons absorbed.
    FreeKinematics fin{m, E + absorbed - in.omega_max, p.p_y(), p.p_z() - in.omega_max - w.n_index * absorbed};
    const double delta_f = (doppler_shifted_frequency(fin, w) - Omega) / Omega;

    ValidityReport r;
    auto& c = r.conditions;
    c.push_back(small_ratio("spin_effects", "E << m^2/E_perp", E * E_perp / (m * m), mg.pass_below, mg.fail_above));
    c.push_back(small_ratio("transverse_coupling", "E_perp << E/gamma^2", E_perp * gamma_sq / E, mg.pass_below,
                            mg.fail_above));
    c.push_back(small_ratio("transverse_energy_change", "dE_perp << E/gamma^2", dE_perp * gamma_sq / E,
                            mg.pass_below, mg.fail_above));
    c.push_back(small_ratio("total_energy_change", "dE << E", dE / E, mg.pass_below, mg.fail_above));
    c.push_back(small_ratio("laser_photon_energy", "omega0 << E", w.omega0 / E, mg.pass_below, mg.fail_above));
    c.push_back(small_ratio("resonance_initial", "|omega0~ - Omega|/Omega << 1", std::abs(delta0),
                            mg.resonance_pass_below, mg.fail_above));
    c.push_back(small_ratio("resonance_final", "|omega~ - Omega|/Omega << 1", std::abs(delta_f),
                            mg.resonance_pass_below, mg.fail_above));
    {
        const double ratio = w.xi / std::abs(delta0);
        c.push_back({"intensity_over_detuning", "xi >> |delta|", ratio, true,
                     grade(1.0 / ratio, mg.pass_below, mg.fail_above)});
    }
    c.push_back(small_ratio("dechanneling", "N omega0 << U0", absorbed / ch.U0(), mg.pass_below, mg.fail_above));
    if (p.species() == Species::electron) {
        c.push_back({"harmonic_model", "electron harmonic_ok", in.harmonic_ok ? 0.0 : 1.0, false,
                     in.harmonic_ok ? Verdict::pass : Verdict::warn});
    }
    return r;
}

}  // namespace chanqed
