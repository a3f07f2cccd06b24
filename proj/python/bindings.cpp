#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "chanqed/scenario.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

// Values may be given as strings or as plain Python numbers / bools.
chanqed::Scenario scenario_from_dict(const py::dict& keys) {
    chanqed::KeyValues kv;
    for (const auto& [k, v] : keys) {
        std::string text;
        if (py::isinstance<py::bool_>(v)) text = v.cast<bool>() ? "true" : "false";
        else if (py::isinstance<py::float_>(v)) text = chanqed::format_double(v.cast<double>());
        else text = py::str(v).cast<std::string>();
        kv[py::str(k).cast<std::string>()] = text;
    }
    return chanqed::Scenario::from_keys(kv);
}

py::dict derived_to_dict(const chanqed::RunManifest& m) {
    const auto& d = m.derived;
    py::dict out("gamma"_a = d.gamma, "E_parallel_eV"_a = d.E_parallel_eV, "E_perp_eV"_a = d.E_perp_eV,
                 "kappa_eV3"_a = d.kappa_eV3, "Omega_eV"_a = d.Omega_eV, "omega0_eV"_a = d.omega0_eV,
                 "omega_tilde0_eV"_a = d.omega_tilde0_eV, "delta0"_a = d.delta0, "theta_L_rad"_a = d.theta_L,
                 "s_max"_a = d.s_max, "N_max"_a = d.N_max, "omega_max_eV"_a = d.omega_max_eV,
                 "nonlinearity"_a = d.nonlinearity);
    out["validity"] = m.validity.to_map();
    out["scenario"] = m.scenario;
    return out;
}

py::dict point_to_dict(const chanqed::SpectralPoint& p) {
    return py::dict("N"_a = p.N, "ds"_a = p.ds, "theta"_a = p.theta, "phi"_a = p.phi, "omega"_a = p.omega,
                    "dW"_a = p.dW, "intensity"_a = p.intensity(), "valid"_a = p.valid, "alpha"_a = p.alpha,
                    "beta"_a = p.beta, "delta_final"_a = p.delta_final, "status"_a = chanqed::to_string(p.status));
}

}  // namespace

PYBIND11_MODULE(_chanqed, m) {
    m.doc() = "Resonant multiphoton Compton scattering on planar-channeled particles";
    m.attr("__version__") = chanqed::library_version;

    py::register_exception<chanqed::ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<chanqed::DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<chanqed::NumericError>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception<chanqed::KinematicsError>(m, "KinematicsError", PyExc_ArithmeticError);

    m.def("bessel_j", &chanqed::bessel_j, "n"_a, "x"_a, "Bessel function of the first kind J_n(x)");
    m.def(
        "lambda_r",
        [](int r, int N, double alpha, double beta, double tolerance) {
            chanqed::QuadratureOptions q;
            q.tolerance = tolerance;
            return chanqed::lambda_r({r, N, alpha, beta}, q);
        },
        "r"_a, "N"_a, "alpha"_a, "beta"_a, "tolerance"_a = 1e-12, "Lambda_r(N, alpha, beta) by trapezoid quadrature");
    m.def(
        "lambda_series", [](int r, int N, double alpha, double beta) {
            return chanqed::lambda_series({r, N, alpha, beta});
        },
        "r"_a, "N"_a, "alpha"_a, "beta"_a, "Lambda_r(N, alpha, beta) through the Bessel series");
    m.def("lambda0_series", &chanqed::lambda0_series, "N"_a, "alpha"_a, "beta"_a);
    m.def("lorentz_gamma", &chanqed::lorentz_gamma, "E"_a, "mass"_a);
    m.def("angular_frequency_to_energy",
          [](double w) { return chanqed::angular_frequency_to_energy(w).value(); }, "omega_rad_per_s"_a);
    m.def(
        "oscillator_frequency",
        [](double U0_eV, double d_angstrom, double E_parallel_eV) {
            return chanqed::oscillator_frequency(chanqed::ChannelModel::from_angstrom(U0_eV, d_angstrom),
                                                 E_parallel_eV);
        },
        "U0_eV"_a, "d_angstrom"_a, "E_parallel_eV"_a);

    m.def(
        "derive", [](const py::dict& keys) {
            return derived_to_dict(chanqed::derive(scenario_from_dict(keys)));
        },
        "scenario"_a, "Derived quantities and validity report of a scenario given as {key: value}");
    m.def(
        "spectrum",
        [](const py::dict& keys, unsigned threads) {
            const auto sc = scenario_from_dict(keys);
            std::vector<chanqed::SpectralPoint> pts;
            {
                py::gil_scoped_release release;
                pts = chanqed::run_spectrum(sc, threads);
            }
            py::list out;
            for (const auto& p : pts) out.append(point_to_dict(p));
            return out;
        },
        "scenario"_a, "threads"_a = 1);
    m.def(
        "spectrum_csv",
        [](const py::dict& keys, unsigned threads) {
            std::ostringstream os;
            chanqed::write_spectrum_csv(os, chanqed::run_spectrum(scenario_from_dict(keys), threads));
            return os.str();
        },
        "scenario"_a, "threads"_a = 1);
    m.def(
        "emitted_frequency",
        [](const py::dict& keys, int l, int ds, double theta,
           double phi) -> std::optional<double> {
            const auto model = chanqed::build_model(scenario_from_dict(keys));
            const chanqed::EmissionContext ctx(model.particle, model.laser, model.channel);
            const int s0 = model.particle.s0();
            return chanqed::emitted_frequency(ctx.initial, model.laser, ctx.Omega, {l, s0, s0 - ds},
                                              chanqed::EmissionGeometry(theta, phi));
        },
        "scenario"_a, "l"_a, "ds"_a = 0, "theta"_a = 0.0, "phi"_a = 0.0);
    m.def(
        "sweep",
        [](const py::dict& keys, const std::string& axis,
           const std::vector<double>& values) {
            const auto rows =
                chanqed::sweep(scenario_from_dict(keys), chanqed::sweep_axis_from_string(axis), values);
            py::list out;
            for (const auto& r : rows) {
                out.append(py::dict("value"_a = r.value, "xi"_a = r.xi, "delta0"_a = r.delta0,
                                    "omega0_eV"_a = r.omega0_eV, "E_MeV"_a = r.E_MeV, "Omega_eV"_a = r.Omega_eV,
                                    "nonlinearity"_a = r.nonlinearity, "enhancement"_a = r.enhancement,
                                    "peak_omega_eV"_a = r.summary.peak_omega, "peak_dW"_a = r.summary.peak_dW,
                                    "valid_points"_a = r.summary.valid, "verdict"_a = chanqed::to_string(r.verdict),
                                    "error"_a = r.error));
            }
            return out;
        },
        "scenario"_a, "axis"_a, "values"_a);
}
