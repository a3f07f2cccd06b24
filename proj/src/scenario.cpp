#include "chanqed/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <ostream>
#include <set>

#include <json.hpp>

namespace chanqed {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "particle.species",     "particle.E_MeV",        "particle.s0",        "particle.E_perp_eV",
        "particle.p_y_eV",      "particle.harmonic_ok",  "channel.preset",     "channel.preset_file",
        "channel.U0_eV",        "channel.d_angstrom",    "channel.n_index",    "laser.omega0_eV",
        "laser.delta0",         "laser.xi",              "scan.theta_rad",     "scan.phi_rad",
        "scan.N",               "scan.transitions",      "tolerances.pass_below",
        "tolerances.fail_above", "tolerances.resonance", "tolerances.dechanneling",
        "tolerances.quadrature",
    };
    return keys;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    while (true) {
        auto pos = s.find(sep);
        parts.push_back(trim(s.substr(0, pos)));
        if (pos == std::string_view::npos) break;
        s = s.substr(pos + 1);
    }
    return parts;
}

template <class T>
void require_increasing(const std::vector<T>& v, const std::string& key) {
    if (v.empty()) throw ConfigError(key + ": grid must not be empty");
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > v[i - 1])) throw ConfigError(key + ": grid must be strictly increasing");
    }
}

std::vector<double> parse_values(std::string_view text, const std::string& key) {
    text = trim(text);
    std::vector<double> out;
    if (text.empty()) return out;
    if (text.rfind("linspace(", 0) == 0 && text.back() == ')') {
        auto args = split(text.substr(9, text.size() - 10), ',');
        if (args.size() != 3) throw ConfigError(key + ": linspace needs (start, stop, count)");
        const double a = parse_double(args[0], key);
        const double b = parse_double(args[1], key);
        const int n = parse_int(args[2], key);
        if (n < 1) throw ConfigError(key + ": linspace count must be >= 1");
        for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    } else {
        for (auto part : split(text, ',')) out.push_back(parse_double(part, key));
    }
    return out;
}

// "a, b, c" or "linspace(a, b, n)", strictly increasing
std::vector<double> parse_real_grid(std::string_view text, const std::string& key) {
    auto out = parse_values(text, key);
    require_increasing(out, key);
    return out;
}

// "a..b" or "a, b, c"
std::vector<int> parse_int_list(std::string_view text, const std::string& key) {
    text = trim(text);
    std::vector<int> out;
    if (auto dots = text.find(".."); dots != std::string_view::npos) {
        const int a = parse_int(text.substr(0, dots), key);
        const int b = parse_int(text.substr(dots + 2), key);
        for (int i = a; i <= b; ++i) out.push_back(i);
    } else {
        for (auto part : split(text, ',')) out.push_back(parse_int(part, key));
    }
    require_increasing(out, key);
    return out;
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        if constexpr (std::is_same_v<T, int>) s += std::to_string(v[i]);
        else s += format_double(v[i]);
    }
    return s;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

Scenario Scenario::from_keys(const KeyValues& kv) {
    for (const auto& [k, v] : kv) {
        if (!known_keys().count(k)) throw ConfigError("unknown key '" + k + "'");
    }
    auto get = [&](const std::string& k) -> const std::string* {
        auto it = kv.find(k);
        return it == kv.end() ? nullptr : &it->second;
    };

    Scenario sc;
    if (auto v = get("particle.species")) sc.species = species_from_string(trim(*v));
    if (auto v = get("particle.E_MeV")) sc.E_MeV = parse_double(*v, "particle.E_MeV");
    else throw ConfigError("particle.E_MeV required");
    if (auto v = get("particle.s0")) sc.s0 = parse_int(*v, "particle.s0");
    if (sc.s0 < 0) throw ConfigError("particle.s0: must be >= 0");
    if (auto v = get("particle.E_perp_eV")) sc.E_perp_eV = parse_double(*v, "particle.E_perp_eV");
    if (auto v = get("particle.p_y_eV")) sc.p_y_eV = parse_double(*v, "particle.p_y_eV");
    if (auto v = get("particle.harmonic_ok")) sc.harmonic_ok = parse_bool(*v, "particle.harmonic_ok");

    if (auto v = get("channel.preset")) sc.preset = std::string(trim(*v));
    auto U0 = get("channel.U0_eV");
    auto d = get("channel.d_angstrom");
    auto n = get("channel.n_index");
    if (!U0 || !d || !n) {
        ChannelPreset base;
        if (auto f = get("channel.preset_file")) {
            base = load_preset_file(std::string(trim(*f)));
            sc.preset = base.name;
        } else {
            base = find_preset(sc.preset);
        }
        sc.U0_eV = base.U0_eV;
        sc.d_angstrom = base.d_angstrom;
        sc.n_index = base.n_index;
    }
    if (U0) sc.U0_eV = parse_double(*U0, "channel.U0_eV");
    if (d) sc.d_angstrom = parse_double(*d, "channel.d_angstrom");
    if (n) sc.n_index = parse_double(*n, "channel.n_index");

    auto w0 = get("laser.omega0_eV");
    auto dl = get("laser.delta0");
    if (w0 && dl) throw ConfigError("laser.omega0_eV and laser.delta0 are mutually exclusive");
    if (w0) sc.omega0_eV = parse_double(*w0, "laser.omega0_eV");
    else if (dl) sc.delta0 = parse_double(*dl, "laser.delta0");
    else throw ConfigError("laser.omega0_eV required (or laser.delta0)");
    if (auto v = get("laser.xi")) sc.xi = parse_double(*v, "laser.xi");
    else throw ConfigError("laser.xi required");

    if (auto v = get("scan.theta_rad")) sc.theta = parse_real_grid(*v, "scan.theta_rad");
    if (auto v = get("scan.phi_rad")) sc.phi = parse_real_grid(*v, "scan.phi_rad");
    if (auto v = get("scan.N"); v && trim(*v) != "auto") {
        sc.N = parse_int_list(*v, "scan.N");
        if (sc.N.front() < 1) throw ConfigError("scan.N: photon numbers must be >= 1");
    }
    if (auto v = get("scan.transitions")) sc.transitions = parse_int_list(*v, "scan.transitions");
    for (double t : sc.theta) {
        if (t < 0.0 || t > constants::pi) throw ConfigError("scan.theta_rad: angles must lie in [0, pi]");
    }

    if (auto v = get("tolerances.pass_below")) sc.margins.pass_below = parse_double(*v, "tolerances.pass_below");
    if (auto v = get("tolerances.fail_above")) sc.margins.fail_above = parse_double(*v, "tolerances.fail_above");
    if (auto v = get("tolerances.resonance")) {
        sc.margins.resonance_pass_below = parse_double(*v, "tolerances.resonance");
    }
    if (auto v = get("tolerances.dechanneling")) sc.dechanneling_margin = parse_double(*v, "tolerances.dechanneling");
    if (auto v = get("tolerances.quadrature")) sc.quadrature.tolerance = parse_double(*v, "tolerances.quadrature");
    if (!(sc.quadrature.tolerance > 0.0)) throw ConfigError("tolerances.quadrature: must be positive");
    return sc;
}

KeyValues Scenario::to_keys() const {
    KeyValues kv;
    kv["particle.species"] = std::string(to_string(species));
    kv["particle.E_MeV"] = format_double(E_MeV);
    kv["particle.s0"] = std::to_string(s0);
    if (E_perp_eV) kv["particle.E_perp_eV"] = format_double(*E_perp_eV);
    kv["particle.p_y_eV"] = format_double(p_y_eV);
    kv["particle.harmonic_ok"] = harmonic_ok ? "true" : "false";
    kv["channel.preset"] = preset;
    kv["channel.U0_eV"] = format_double(U0_eV);
    kv["channel.d_angstrom"] = format_double(d_angstrom);
    kv["channel.n_index"] = format_double(n_index);
    if (omega0_eV) kv["laser.omega0_eV"] = format_double(*omega0_eV);
    if (delta0) kv["laser.delta0"] = format_double(*delta0);
    kv["laser.xi"] = format_double(xi);
    kv["scan.theta_rad"] = join(theta);
    kv["scan.phi_rad"] = join(phi);
    kv["scan.N"] = N.empty() ? "auto" : join(N);
    kv["scan.transitions"] = join(transitions);
    kv["tolerances.pass_below"] = format_double(margins.pass_below);
    kv["tolerances.fail_above"] = format_double(margins.fail_above);
    kv["tolerances.resonance"] = format_double(margins.resonance_pass_below);
    kv["tolerances.dechanneling"] = format_double(dechanneling_margin);
    kv["tolerances.quadrature"] = format_double(quadrature.tolerance);
    return kv;
}

Scenario load_scenario(const std::string& path, const std::vector<std::string>& overrides) {
    auto kv = read_key_values_file(path);
    for (const auto& o : overrides) apply_override(kv, o);
    return Scenario::from_keys(kv);
}

ScenarioModel build_model(const Scenario& sc) {
    try {
        const ChannelModel ch = ChannelModel::from_angstrom(sc.U0_eV, sc.d_angstrom, sc.n_index);
        const double E = sc.E_MeV * 1e6;
        ParticleState p = sc.E_perp_eV
                              ? ParticleState::with_transverse_energy(sc.species, E, *sc.E_perp_eV, sc.s0, sc.p_y_eV)
                              : ParticleState::on_level(ch, sc.species, E, sc.s0);
        if (!sc.E_perp_eV && sc.p_y_eV != 0.0) p = ParticleState(sc.species, E, p.p_z(), sc.p_y_eV, sc.s0);

        const double Omega = oscillator_frequency(ch, p);
        const double omega0 = sc.omega0_eV ? *sc.omega0_eV : omega0_for_detuning(p, sc.n_index, Omega, *sc.delta0);
        const LaserWave laser(omega0, sc.xi, sc.n_index);

        DerivedQuantities d{};
        d.gamma = p.gamma();
        d.E_parallel_eV = p.E_parallel();
        d.E_perp_eV = p.E_perp();
        d.kappa_eV3 = ch.kappa();
        d.Omega_eV = Omega;
        d.omega0_eV = omega0;
        d.omega_tilde0_eV = doppler_shifted_frequency(p, laser);
        d.delta0 = (d.omega_tilde0_eV - Omega) / Omega;
        d.theta_L = lindhard_angle(ch, p);
        d.s_max = max_level(ch, p);
        d.N_max = static_cast<int>(std::floor(sc.dechanneling_margin * ch.U0() / omega0));
        d.nonlinearity = std::pow(sc.xi / (2.0 * d.delta0), 2);

        ScanGrid grid;
        if (sc.N.empty()) {
            for (int k = 1; k <= d.N_max; ++k) grid.N.push_back(k);
        } else {
            grid.N = sc.N;
        }
        grid.ds = sc.transitions;
        grid.theta = sc.theta;
        grid.phi = sc.phi;

        d.omega_max_eV = 0.0;
        if (!grid.N.empty()) {
            const DressedState ds = dress(p, laser, Omega);
            const int top_ds = std::min(*std::max_element(grid.ds.begin(), grid.ds.end()), p.s0());
            if (auto w = emitted_frequency(ds, laser, Omega, {grid.N.back(), p.s0(), p.s0() - top_ds},
                                           EmissionGeometry(0.0))) {
                d.omega_max_eV = *w;
            }
        }
        return {ch, p, laser, grid, d};
    } catch (const DomainError& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
}

RunManifest derive(const Scenario& sc) {
    const auto model = build_model(sc);
    RunManifest m;
    m.scenario = sc.to_keys();
    m.version = library_version;
    m.derived = model.derived;
    const int N_top = model.grid.N.empty() ? model.derived.N_max : model.grid.N.back();
    m.validity = check_validity(model.particle, model.laser, model.channel,
                                {N_top, model.derived.omega_max_eV, sc.harmonic_ok, sc.margins});
    m.timestamp = utc_timestamp();
    return m;
}

SpectrumSummary summarize(const std::vector<SpectralPoint>& points) {
    SpectrumSummary s;
    s.points = points.size();
    for (const auto& p : points) {
        s.peak_omega = std::max(s.peak_omega, p.omega);
        if (!p.valid) continue;
        ++s.valid;
        s.total_dW += p.dW;
        if (p.dW > s.peak_dW) {
            s.peak_dW = p.dW;
            s.omega_at_peak_dW = p.omega;
        }
    }
    return s;
}

std::vector<SpectralPoint> run_spectrum(const Scenario& sc, unsigned threads) {
    const auto model = build_model(sc);
    const EmissionContext ctx(model.particle, model.laser, model.channel, sc.quadrature);
    return spectrum_scan(ctx, model.grid, threads);
}

SweepAxis sweep_axis_from_string(const std::string& s) {
    if (s == "xi") return SweepAxis::xi;
    if (s == "delta0") return SweepAxis::delta0;
    if (s == "E") return SweepAxis::E;
    throw ConfigError("sweep axis must be xi, delta0 or E, got '" + s + "'");
}

std::vector<SweepRow> sweep(const Scenario& sc, SweepAxis axis, const std::vector<double>& values, unsigned threads) {
    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (double v : values) {
        SweepRow row;
        row.value = v;
        try {
            if (!std::isfinite(v)) throw ConfigError("sweep value must be finite");
            Scenario s = sc;
            switch (axis) {
                case SweepAxis::xi: s.xi = v; break;
                case SweepAxis::delta0:
                    s.delta0 = v;
                    s.omega0_eV.reset();
                    break;
                case SweepAxis::E: s.E_MeV = v; break;
            }
            const auto m = derive(s);
            row.xi = s.xi;
            row.delta0 = m.derived.delta0;
            row.omega0_eV = m.derived.omega0_eV;
            row.E_MeV = s.E_MeV;
            row.Omega_eV = m.derived.Omega_eV;
            row.nonlinearity = m.derived.nonlinearity;
            row.enhancement = s.xi > 0.0 ? row.nonlinearity / (s.xi * s.xi) : 0.25 / (row.delta0 * row.delta0);
            row.verdict = m.validity.overall();
            row.summary = summarize(run_spectrum(s, threads));
        } catch (const std::exception& e) {
            row.error = e.what();
            row.verdict = Verdict::fail;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<double> parse_value_list(const std::string& text, const std::string& key) {
    return parse_values(text, key);
}

std::string format_csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

void write_spectrum_csv(std::ostream& os, const std::vector<SpectralPoint>& points) {
    os << "N,theta_rad,phi_rad,omega_eV,dW,intensity,valid,ds,alpha,beta,delta_final,status\n";
    for (const auto& p : points) {
        os << p.N << ',' << format_csv_double(p.theta) << ',' << format_csv_double(p.phi) << ','
           << format_csv_double(p.omega) << ',' << format_csv_double(p.dW) << ',' << format_csv_double(p.intensity())
           << ',' << (p.valid ? 1 : 0) << ',' << p.ds << ',' << format_csv_double(p.alpha) << ','
           << format_csv_double(p.beta) << ',' << format_csv_double(p.delta_final) << ',' << to_string(p.status)
           << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "value,xi,delta0,omega0_eV,E_MeV,Omega_eV,nonlinearity,enhancement,points,valid_points,"
          "peak_omega_eV,peak_dW,omega_at_peak_dW_eV,total_dW,verdict,error\n";
    for (const auto& r : rows) {
        auto f = format_csv_double;
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        os << f(r.value) << ',' << f(r.xi) << ',' << f(r.delta0) << ',' << f(r.omega0_eV) << ',' << f(r.E_MeV) << ','
           << f(r.Omega_eV) << ',' << f(r.nonlinearity) << ',' << f(r.enhancement) << ',' << r.summary.points << ','
           << r.summary.valid << ',' << f(r.summary.peak_omega) << ',' << f(r.summary.peak_dW) << ','
           << f(r.summary.omega_at_peak_dW) << ',' << f(r.summary.total_dW) << ',' << to_string(r.verdict) << ','
           << err << '\n';
    }
}

std::string manifest_to_json(const RunManifest& m) {
    nlohmann::json j;
    j["version"] = m.version;
    j["timestamp"] = m.timestamp;
    j["scenario"] = m.scenario;
    const auto& d = m.derived;
    j["derived"] = {
        {"gamma", d.gamma},
        {"E_parallel_eV", d.E_parallel_eV},
        {"E_perp_eV", d.E_perp_eV},
        {"kappa_eV3", d.kappa_eV3},
        {"Omega_eV", d.Omega_eV},
        {"omega0_eV", d.omega0_eV},
        {"omega_tilde0_eV", d.omega_tilde0_eV},
        {"delta0", d.delta0},
        {"theta_L_rad", d.theta_L},
        {"s_max", d.s_max},
        {"N_max", d.N_max},
        {"omega_max_eV", d.omega_max_eV},
        {"nonlinearity", d.nonlinearity},
    };
    nlohmann::json conds = nlohmann::json::array();
    for (const auto& c : m.validity.conditions) {
        conds.push_back({{"name", c.name},
                         {"relation", c.relation},
                         {"ratio", c.ratio},
                         {"verdict", to_string(c.verdict)}});
    }
    j["validity"] = {{"overall", to_string(m.validity.overall())}, {"conditions", conds}};
    return j.dump(2) + "\n";
}

KeyValues scenario_from_manifest_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("manifest: ") + e.what());
    }
    if (!j.contains("scenario") || !j["scenario"].is_object()) throw ConfigError("manifest: 'scenario' object missing");
    KeyValues kv;
    for (const auto& [k, v] : j["scenario"].items()) {
        if (!v.is_string()) throw ConfigError("manifest: scenario value for '" + k + "' must be a string");
        kv[k] = v.get<std::string>();
    }
    return kv;
}

}  // namespace chanqed
