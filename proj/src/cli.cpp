#include "chanqed/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "chanqed/scenario.hpp"

namespace chanqed::cli {

namespace {

std::string sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

struct ScenarioSource {
    std::string scenario_path;
    std::string manifest_path;
    std::vector<std::string> overrides;

    void attach(CLI::App* cmd, bool allow_manifest) {
        cmd->add_option("--scenario,-s", scenario_path, "Scenario key-value file");
        if (allow_manifest) {
            cmd->add_option("--from-manifest", manifest_path, "Re-run the scenario echoed in a manifest");
        }
        cmd->add_option("--set", overrides, "Override key=value (repeatable, last wins)");
    }

    Scenario load() const {
        KeyValues kv;
        if (!manifest_path.empty()) {
            std::ifstream in(manifest_path);
            if (!in) throw ConfigError("cannot open file '" + manifest_path + "'");
            std::stringstream ss;
            ss << in.rdbuf();
            kv = scenario_from_manifest_json(ss.str());
        } else if (!scenario_path.empty()) {
            kv = read_key_values_file(scenario_path);
        }
        if (manifest_path.empty() && scenario_path.empty() && overrides.empty()) {
            throw ConfigError("a scenario is required (--scenario FILE or --set key=value)");
        }
        for (const auto& o : overrides) apply_override(kv, o);
        return Scenario::from_keys(kv);
    }
};

void write_file(const std::string& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write file '" + path + "'");
    f << body;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Resonant multiphoton Compton scattering on planar-channeled particles"};
    app.name(args.empty() ? "chanqed" : args.front());
    app.require_subcommand(1);

    unsigned default_threads = std::max(1u, std::thread::hardware_concurrency());

    // lambda
    auto* lam = app.add_subcommand("lambda", "Evaluate Lambda_r(N, alpha, beta)");
    LambdaArgs la;
    std::string method = "quad";
    double tolerance = 1e-12;
    lam->add_option("-r", la.r, "Power of cos(theta): 0, 1 or 2")->required()->check(CLI::Range(0, 2));
    lam->add_option("-N", la.N, "Photon number")->required();
    lam->add_option("--alpha", la.alpha, "alpha argument");
    lam->add_option("--beta", la.beta, "beta argument");
    lam->add_option("--method", method, "quad, series or both")->check(CLI::IsMember({"quad", "series", "both"}));
    lam->add_option("--tolerance", tolerance, "Quadrature tolerance");

    // frequency
    auto* freq = app.add_subcommand("frequency", "Emitted photon energy for one channel and direction");
    ScenarioSource freq_src;
    freq_src.attach(freq, false);
    int harmonic = 1;
    int ds = 0;
    double theta = 0.0, phi = 0.0;
    freq->add_option("--harmonic,-l", harmonic, "Net absorbed laser photons l");
    freq->add_option("--ds", ds, "Level change s0 - s");
    freq->add_option("--theta", theta, "Polar angle from the beam axis [rad]");
    freq->add_option("--phi", phi, "Azimuth from the polarization axis [rad]");

    // spectrum
    auto* spec = app.add_subcommand("spectrum", "Scan the resonant spectrum and write CSV + manifest");
    ScenarioSource spec_src;
    spec_src.attach(spec, true);
    std::string out_path, manifest_out;
    bool force = false;
    unsigned threads = default_threads;
    spec->add_option("--out,-o", out_path, "CSV output path")->required();
    spec->add_option("--manifest-out", manifest_out, "Manifest path (default: <out>.manifest.json)");
    spec->add_flag("--force", force, "Run even when a validity condition fails");
    spec->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

    // sweep
    auto* swp = app.add_subcommand("sweep", "One spectrum summary per parameter value");
    ScenarioSource swp_src;
    swp_src.attach(swp, true);
    std::string axis_name, values_text, sweep_out;
    unsigned sweep_threads = default_threads;
    swp->add_option("--axis", axis_name, "xi, delta0 or E (MeV)")->required();
    swp->add_option("--values", values_text, "\"a, b, c\" or \"linspace(a, b, n)\"")->required();
    swp->add_option("--out,-o", sweep_out, "CSV output path (default: stdout)");
    swp->add_option("--threads", sweep_threads, "Worker threads")->check(CLI::PositiveNumber);

    // validate
    auto* val = app.add_subcommand("validate", "Report the applicability conditions of a scenario");
    ScenarioSource val_src;
    val_src.attach(val, true);
    std::string format = "text";
    val->add_option("--format", format, "text or kv")->check(CLI::IsMember({"text", "kv"}));

    // presets
    auto* pre = app.add_subcommand("presets", "List the built-in channel presets");
    std::string show;
    pre->add_option("--show", show, "Print one preset as a preset file");

    try {
        // CLI11 consumes a reversed argument vector without the program name.
        std::vector<std::string> rev(args.rbegin(), args.rend());
        if (!rev.empty()) rev.pop_back();
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ExitCode::ok : ExitCode::config_error;
    }

    try {
        if (lam->parsed()) {
            QuadratureOptions q;
            q.tolerance = tolerance;
            char buf[160];
            std::snprintf(buf, sizeof buf, "r=%d N=%d alpha=%.17g beta=%.17g\n", la.r, la.N, la.alpha, la.beta);
            out << buf;
            double vq = 0.0, vs = 0.0;
            if (method != "series") {
                vq = lambda_r(la, q);
                out << "quad     " << sci(vq) << '\n';
            }
            if (method != "quad") {
                vs = lambda_series(la);
                out << "series   " << sci(vs) << '\n';
            }
            if (method == "both") out << "diff     " << sci(vq - vs) << '\n';
            return ExitCode::ok;
        }

        if (freq->parsed()) {
            const auto sc = freq_src.load();
            const auto model = build_model(sc);
            const EmissionContext ctx(model.particle, model.laser, model.channel, sc.quadrature);
            const int s0 = model.particle.s0();
            const auto w = emitted_frequency(ctx.initial, model.laser, ctx.Omega, {harmonic, s0, s0 - ds},
                                             EmissionGeometry(theta, phi));
            if (!w) {
                out << "forbidden\n";
            } else {
                out << "omega_eV        " << sci(*w) << '\n';
                out << "omega/omega0    " << sci(*w / model.laser.omega0) << '\n';
            }
            return ExitCode::ok;
        }

        if (spec->parsed()) {
            const auto sc = spec_src.load();
            const auto manifest = derive(sc);
            const bool hard_fail = manifest.validity.overall() == Verdict::fail;
            if (hard_fail && !force) {
                err << manifest.validity.to_text();
                err << "validity check failed; rerun with --force to scan anyway\n";
                return ExitCode::validity_error;
            }
            const auto points = run_spectrum(sc, threads);
            std::ostringstream csv;
            write_spectrum_csv(csv, points);
            write_file(out_path, csv.str());
            write_file(manifest_out.empty() ? out_path + ".manifest.json" : manifest_out, manifest_to_json(manifest));
            const auto s = summarize(points);
            out << "points           " << s.points << '\n';
            out << "valid points     " << s.valid << '\n';
            out << "peak omega [eV]  " << sci(s.peak_omega) << '\n';
            out << "peak dW          " << sci(s.peak_dW) << " at omega " << sci(s.omega_at_peak_dW) << '\n';
            out << "validity         " << to_string(manifest.validity.overall()) << (hard_fail ? " (forced)" : "")
                << '\n';
            return ExitCode::ok;
        }

        if (swp->parsed()) {
            const auto sc = swp_src.load();
            const auto axis = sweep_axis_from_string(axis_name);
            const auto values = parse_value_list(values_text, "--values");
            const auto rows = sweep(sc, axis, values, sweep_threads);
            std::ostringstream csv;
            write_sweep_csv(csv, rows);
            if (sweep_out.empty()) out << csv.str();
            else write_file(sweep_out, csv.str());
            return ExitCode::ok;
        }

        if (val->parsed()) {
            const auto sc = val_src.load();
            const auto m = derive(sc);
            if (format == "kv") {
                out << format_key_values(m.validity.to_map());
            } else {
                char buf[200];
                std::snprintf(buf, sizeof buf,
                              "gamma %.6g  Omega %.6g eV  omega0 %.6g eV  delta0 %.6g  N_max %d  s_max %d\n",
                              m.derived.gamma, m.derived.Omega_eV, m.derived.omega0_eV, m.derived.delta0,
                              m.derived.N_max, m.derived.s_max);
                out << buf << m.validity.to_text();
            }
            return m.validity.overall() == Verdict::fail ? ExitCode::validity_error : ExitCode::ok;
        }

        if (pre->parsed()) {
            if (!show.empty()) {
                const auto& p = find_preset(show);
                out << "name = " << p.name << "\nnote = " << p.note << "\nU0_eV = " << format_double(p.U0_eV)
                    << "\nd_angstrom = " << format_double(p.d_angstrom) << "\nn_index = " << format_double(p.n_index)
                    << '\n';
                return ExitCode::ok;
            }
            for (const auto& p : builtin_presets()) {
                char buf[200];
                std::snprintf(buf, sizeof buf, "%-20s U0 = %g eV  d = %g A  n = %g  (%s)\n", p.name.c_str(), p.U0_eV,
                              p.d_angstrom, p.n_index, p.note.c_str());
                out << buf;
            }
            return ExitCode::ok;
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return ExitCode::config_error;
    } catch (const DomainError& e) {
        err << "config error: " << e.what() << '\n';
        return ExitCode::config_error;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << " (estimate " << e.error_estimate() << ")\n";
        return ExitCode::numeric_error;
    } catch (const KinematicsError& e) {
        err << "numeric error: " << e.what() << '\n';
        return ExitCode::numeric_error;
    }
    return ExitCode::config_error;
}

}  // namespace chanqed::cli
