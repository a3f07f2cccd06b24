#include "chanqed/emission.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace chanqed {

EmissionGeometry::EmissionGeometry(double theta, double phi) : theta_(theta), phi_(phi) {
    if (!std::isfinite(theta) || !std::isfinite(phi)) throw DomainError("geometry: non-finite angle");
    if (theta < 0.0 || theta > constants::pi) throw DomainError("geometry: theta must lie in [0, pi]");
    const double st = std::sin(theta);
    dir_ = {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

MeanVelocity mean_velocity(const DressedState& ds) {
    if (!(ds.Pi > 0.0)) throw KinematicsError("mean_velocity: quasienergy must be positive");
    MeanVelocity v{ds.Pi_y / ds.Pi, ds.Pi_z / ds.Pi};
    if (!(v.v_y * v.v_y + v.v_z * v.v_z < 1.0)) {
        throw KinematicsError("mean_velocity: dressed mean velocity is not subluminal");
    }
    return v;
}

namespace {

// Pi - k.Pi_parallel / omega, arranged so that nothing cancels for theta -> 0, v -> 1.
double light_cone_denominator(const DressedState& ds, const EmissionGeometry& g, double n) {
    const double pi_minus_piz = (ds.free.E - ds.free.p_z) + (1.0 + n) * ds.shift;
    const double s = std::sin(0.5 * g.theta());
    return pi_minus_piz + ds.Pi_z * 2.0 * s * s - ds.Pi_y * g.direction()[1];
}

}  // namespace

std::optional<double> emitted_frequency(const DressedState& ds, const LaserWave& w, double Omega,
                                        const EmissionChannel& channel, const EmissionGeometry& geom) {
    (void)mean_velocity(ds);
    const double n = w.n_index;
    const double numer = ds.Pi + n * ds.Pi_z;  // Pi (1 + n v_z)
    const double denom = light_cone_denominator(ds, geom, n);
    if (!(denom > 0.0)) throw KinematicsError("emitted_frequency: photon direction on the light cone");
    const double Omega_prime = Omega * ds.Pi / numer;
    const double bracket = channel.l * w.omega0 + Omega_prime * (channel.s0 - channel.s);
    const double omega = numer / denom * bracket;
    if (omega < 0.0) return std::nullopt;
    return omega;
}

AlphaBeta alpha_beta(const DressedState& initial, const DressedState& final_state, double xi, double k_x) {
    const double d0 = initial.delta;
    const double df = final_state.delta;
    const double Omega = initial.Omega;
    if (!(Omega > 0.0)) throw DomainError("alpha_beta: Omega must be positive");
    if (d0 == 0.0 || df == 0.0) {
        throw DomainError("alpha_beta: exact resonance pole (delta = 0); use a finite detuning");
    }
    const double O2 = Omega * Omega;
    const double Delta0 = O2 * d0 * (2.0 + d0);
    const double Delta = O2 * df * (2.0 + df);
    const double cross = O2 * (d0 + df + d0 * df);  // omega0~ omega~ - Omega^2
    const double m = initial.free.mass;
    const double denom = initial.E_par * Delta * Delta0;
    AlphaBeta ab;
    ab.alpha = xi * 2.0 * m * k_x * initial.omega_tilde * cross / denom;
    ab.beta = xi * xi * m * m * Omega * (d0 - df) * cross / (8.0 * denom);
    return ab;
}

const char* to_string(PointStatus s) {
    switch (s) {
        case PointStatus::ok: return "ok";
        case PointStatus::negative_bracket: return "negative_bracket";
        case PointStatus::forbidden: return "forbidden";
        case PointStatus::kinematics_error: return "kinematics_error";
        case PointStatus::pole: return "pole";
        case PointStatus::numeric_error: return "numeric_error";
    }
    return "?";
}

double resonant_bracket(const LambdaTriple& L, double R) {
    return -L.l0 * L.l0 + R * R * (L.l1 * L.l1 - L.l0 * L.l2);
}

EmissionContext::EmissionContext(const ParticleState& p, const LaserWave& w, const ChannelModel& ch,
                                 QuadratureOptions quad)
    : particle(p),
      laser(w),
      channel(ch),
      Omega(oscillator_frequency(ch, p)),
      initial(dress(p, w, Omega)),
      quadrature(quad) {}

SpectralPoint differential_probability(const EmissionContext& ctx, int N, const EmissionGeometry& geom, int ds) {
    if (N < 1) throw DomainError("differential_probability: resonant channel needs N >= 1");
    const auto& w = ctx.laser;
    const auto& in = ctx.initial;
    SpectralPoint pt;
    pt.N = N;
    pt.ds = ds;
    pt.theta = geom.theta();
    pt.phi = geom.phi();

    const int s0 = ctx.particle.s0();
    const auto omega = emitted_frequency(in, w, ctx.Omega, {N, s0, s0 - ds}, geom);
    if (!omega || *omega == 0.0) {
        pt.status = PointStatus::forbidden;
        return pt;
    }
    pt.omega = *omega;

    const double Pi_f = in.Pi + N * w.omega0 - pt.omega;
    if (!(Pi_f > 0.0)) throw KinematicsError("differential_probability: final quasienergy is not positive");
    const double Pi_z_f = in.Pi_z - geom.k_z(pt.omega) - N * w.n_index * w.omega0;
    const double Pi_y_f = in.Pi_y - geom.k_y(pt.omega);
    const DressedState fin = undress(Pi_f, Pi_y_f, Pi_z_f, in.free.mass, w, ctx.Omega);
    pt.delta_final = fin.delta;

    const auto ab = alpha_beta(in, fin, w.xi, geom.k_x(pt.omega));
    pt.alpha = ab.alpha;
    pt.beta = ab.beta;

    const auto L = lambda_all(N, ab.alpha, ab.beta, ctx.quadrature);
    pt.bracket = resonant_bracket(L, w.xi / (2.0 * in.delta));

    const double m = in.free.mass;
    const double prefactor =
        m * m * constants::e_squared / (2.0 * constants::pi * pt.omega * w.omega0 * in.Pi * Pi_f);
    if (pt.bracket >= 0.0) {
        pt.dW = prefactor * pt.bracket;
        pt.valid = true;
        pt.status = PointStatus::ok;
    } else {
        pt.dW = 0.0;
        pt.valid = false;
        pt.status = PointStatus::negative_bracket;
    }
    return pt;
}

namespace {

struct Task {
    int N;
    int ds;
    double theta;
    double phi;
};

SpectralPoint evaluate(const EmissionContext& ctx, const Task& t) {
    const EmissionGeometry geom(t.theta, t.phi);
    auto flagged = [&](PointStatus status) {
        SpectralPoint pt;
        pt.N = t.N;
        pt.ds = t.ds;
        pt.theta = t.theta;
        pt.phi = t.phi;
        pt.status = status;
        try {
            const int s0 = ctx.particle.s0();
            if (auto w = emitted_frequency(ctx.initial, ctx.laser, ctx.Omega, {t.N, s0, s0 - t.ds}, geom)) {
                pt.omega = *w;
            }
        } catch (const std::exception&) {
        }
        return pt;
    };
    try {
        return differential_probability(ctx, t.N, geom, t.ds);
    } catch (const KinematicsError&) {
        return flagged(PointStatus::kinematics_error);
    } catch (const DomainError&) {
        return flagged(PointStatus::pole);
    } catch (const NumericError&) {
        return flagged(PointStatus::numeric_error);
    }
}

}  // namespace

std::vector<SpectralPoint> spectrum_scan(const EmissionContext& ctx, const ScanGrid& grid, unsigned threads) {
    const int s0 = ctx.particle.s0();
    const int s_max = max_level(ctx.channel, ctx.particle);
    std::vector<Task> tasks;
    for (int N : grid.N) {
        for (int ds : grid.ds) {
            const int s = s0 - ds;
            if (s < 0 || s > s_max) continue;
            for (double th : grid.theta) {
                for (double ph : grid.phi) tasks.push_back({N, ds, th, ph});
            }
        }
    }

    std::vector<SpectralPoint> out(tasks.size());
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(tasks.size())));
    if (workers <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) out[i] = evaluate(ctx, tasks[i]);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned k = 0; k < workers; ++k) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < tasks.size(); i = next++) out[i] = evaluate(ctx, tasks[i]);
        });
    }
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace chanqed
