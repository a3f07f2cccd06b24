#include <doctest.h>

#include <algorithm>
#include <random>

#include "chanqed/emission.hpp"
#include "oracles.hpp"

using namespace chanqed;

namespace {
const double m = constants::electron_mass;
const ChannelModel si = ChannelModel::from_angstrom(20.0, 1.92);

EmissionContext resonant_context(double E, double delta, double xi, int s0 = 0) {
    const auto p = ParticleState::on_level(si, Species::positron, E, s0);
    const double Omega = oscillator_frequency(si, p);
    return EmissionContext(p, LaserWave(omega0_for_detuning(p, 1.0, Omega, delta), xi), si);
}
}  // namespace

TEST_CASE("emission geometry") {
    const EmissionGeometry fwd(0.0);
    CHECK(fwd.k_x(3.0) == 0.0);
    CHECK(fwd.k_y(3.0) == 0.0);
    CHECK(fwd.k_z(3.0) == 3.0);
    const EmissionGeometry g(0.3, 1.1);
    const auto d = g.direction();
    CHECK(d[0] * d[0] + d[1] * d[1] + d[2] * d[2] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g.k_x(2.0) == doctest::Approx(2.0 * std::sin(0.3) * std::cos(1.1)));
    CHECK_THROWS_AS(EmissionGeometry(-0.1), DomainError);
    CHECK_THROWS_AS(EmissionGeometry(4.0), DomainError);
}

TEST_CASE("mean velocity") {
    const auto p = ParticleState::with_transverse_energy(Species::positron, 50e6, 0.0);
    const auto free = dress(p, LaserWave(1.0, 0.0), 0.9);
    CHECK(mean_velocity(free).v_z == p.p_z() / p.E());
    CHECK(std::abs(mean_velocity(free).v_z - 0.99994777465087623) < 1e-15);

    // with delta > 0 the dressing adds effective mass
    const auto ctx = resonant_context(50e6, 0.05, 0.0);
    double last = 1.0;
    for (double xi : {0.0, 0.1, 0.3, 0.6, 1.0}) {
        const LaserWave w(ctx.laser.omega0, xi);
        const double v = mean_velocity(dress(ctx.particle, w, ctx.Omega)).v_z;
        CHECK(v <= last);
        last = v;
    }
}

TEST_CASE("emitted frequency elementary cases") {
    const auto ctx = resonant_context(50e6, 0.05, 0.5);
    CHECK(*emitted_frequency(ctx.initial, ctx.laser, ctx.Omega, {0, 3, 3}, EmissionGeometry(0.01)) == 0.0);
    CHECK_FALSE(emitted_frequency(ctx.initial, ctx.laser, ctx.Omega, {-2, 0, 0}, EmissionGeometry(0.0)).has_value());

    const auto p = ParticleState::with_transverse_energy(Species::positron, 50e6, 0.0);
    const LaserWave w(20.0, 0.0);
    const auto ds = dress(p, w, 0.9);
    const double fwd = *emitted_frequency(ds, w, 0.9, {1, 0, 0}, EmissionGeometry(0.0));
    CHECK(oracle::close_rel(fwd, 765891.58644447065, 1e-10));
    const double back = *emitted_frequency(ds, w, 0.9, {1, 0, 0}, EmissionGeometry(constants::pi));
    CHECK(oracle::close_rel(back, 20.0, 1e-12));
}

TEST_CASE("emitted frequency is additive in harmonics and level change") {
    const auto ctx = resonant_context(80e6, -0.04, 0.3, 5);
    for (double th : {0.0, 1e-4, 3e-3}) {
        const EmissionGeometry g(th, 0.4);
        for (int l = 0; l <= 4; ++l) {
            for (int ds = 0; ds <= 3; ++ds) {
                const double both = *emitted_frequency(ctx.initial, ctx.laser, ctx.Omega, {l, 5, 5 - ds}, g);
                const double a = *emitted_frequency(ctx.initial, ctx.laser, ctx.Omega, {l, 5, 5}, g);
                const double b = *emitted_frequency(ctx.initial, ctx.laser, ctx.Omega, {0, 5, 5 - ds}, g);
                CHECK(both == doctest::Approx(a + b).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("Compton limit against the free-particle formula") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> lg(std::log(1e6), std::log(1e10));
    std::uniform_real_distribution<double> th(0.0, constants::pi);
    std::uniform_real_distribution<double> ph(-constants::pi, constants::pi);
    std::uniform_real_distribution<double> ep(0.0, 10.0);
    std::uniform_real_distribution<double> py(-100.0, 100.0);
    std::uniform_real_distribution<double> w0(0.1, 5.0);
    std::uniform_real_distribution<double> xi(0.0, 2.0);
    std::uniform_int_distribution<int> ll(1, 8);
    for (int i = 0; i < 1000; ++i) {
        const double E = std::exp(lg(rng));
        const auto p = ParticleState::with_transverse_energy(Species::positron, E, ep(rng), 0, py(rng));
        const double theta = th(rng), phi = ph(rng);
        const int l = ll(rng);
        const LaserWave free_wave(w0(rng), 0.0);
        const auto ds = dress(p, free_wave, 0.0);
        const double got = *emitted_frequency(ds, free_wave, 0.0, {l, 0, 0}, EmissionGeometry(theta, phi));
        const double want = oracle::compton_frequency(p.E(), p.p_y(), p.p_z(), theta, phi, l, free_wave.omega0);
        CHECK(oracle::close_rel(got, want, 1e-12));

        const LaserWave strong(free_wave.omega0, xi(rng));
        const auto dv = dress(p, strong, 0.0);
        const double S = oracle::volkov_shift(m, p.E(), p.p_z(), strong.xi);
        CHECK(oracle::close_rel(dv.shift, S, 1e-14));
        const double got_v = *emitted_frequency(dv, strong, 0.0, {l, 0, 0}, EmissionGeometry(theta, phi));
        const double want_v =
            oracle::compton_frequency(p.E(), p.p_y(), p.p_z(), theta, phi, l, strong.omega0, 1.0, S);
        CHECK(oracle::close_rel(got_v, want_v, 1e-12));
    }
}

TEST_CASE("alpha and beta") {
    const auto ctx = resonant_context(50e6, 0.05, 0.5);
    const auto& in = ctx.initial;
    CHECK(alpha_beta(in, in, 0.5, 0.0).alpha == 0.0);
    CHECK(alpha_beta(in, in, 0.5, 123.0).beta == 0.0);

    const EmissionGeometry g(5e-3, 0.0);
    const double kx = g.k_x(0.5e6);
    const auto ab = alpha_beta(in, in, 0.5, kx);
    const auto raw = oracle::alpha_beta_raw(in.omega_tilde, in.omega_tilde, in.Omega, 0.5, m, in.E_par, kx);
    CHECK(oracle::close_rel(ab.alpha, raw.alpha, 1e-9));

    auto pole = in;
    pole.delta = 0.0;
    CHECK_THROWS_AS(alpha_beta(in, pole, 0.5, kx), DomainError);
}

TEST_CASE("factored alpha and beta match the raw Doppler form") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> mag(std::log(1e-3), std::log(0.2));
    std::bernoulli_distribution sign(0.5);
    const auto ctx = resonant_context(50e6, 0.05, 0.5);
    for (int i = 0; i < 2000; ++i) {
        auto a = ctx.initial;
        auto b = ctx.initial;
        a.delta = (sign(rng) ? 1 : -1) * std::exp(mag(rng));
        b.delta = (sign(rng) ? 1 : -1) * std::exp(mag(rng));
        a.omega_tilde = a.Omega * (1 + a.delta);
        b.omega_tilde = b.Omega * (1 + b.delta);
        const auto f = alpha_beta(a, b, 0.5, 40.0);
        const auto r = oracle::alpha_beta_raw(a.omega_tilde, b.omega_tilde, a.Omega, 0.5, m, a.E_par, 40.0);
        CHECK(oracle::close_rel(f.alpha, r.alpha, 1e-9));
        CHECK(oracle::close_rel(f.beta, r.beta, 1e-9));
    }
}

TEST_CASE("small argument expansion of the bracket") {
    // N = 1, beta = 0: L1^2 - L0 L2 = 1/4 - alpha^2 / 8 + O(alpha^4)
    for (double a : {1e-3, 3e-3, 1e-2}) {
        const auto t = lambda_all(1, a, 0.0);
        const double R = 40.0;
        const double bracket = -t.l0 * t.l0 + R * R * (t.l1 * t.l1 - t.l0 * t.l2);
        const double expansion = -a * a / 4 + R * R * (0.25 - a * a / 8);
        CHECK(std::abs(bracket - expansion) < 2 * R * R * std::pow(a, 4));
        CHECK(bracket > 0.0);
    }
}

TEST_CASE("differential probability point structure") {
    const auto ctx = resonant_context(50e6, 0.05, 0.5);
    const auto pt = differential_probability(ctx, 1, EmissionGeometry(3e-4, 0.3));
    REQUIRE(pt.status == PointStatus::ok);
    const auto L = lambda_all(1, pt.alpha, pt.beta);
    const double R = 0.5 / (2 * ctx.initial.delta);
    CHECK(pt.bracket == doctest::Approx(-L.l0 * L.l0 + R * R * (L.l1 * L.l1 - L.l0 * L.l2)).epsilon(1e-12));
    const double Pi_f = ctx.initial.Pi + ctx.laser.omega0 - pt.omega;
    const double pref = m * m * constants::e_squared /
                        (2 * constants::pi * pt.omega * ctx.laser.omega0 * ctx.initial.Pi * Pi_f);
    CHECK(pt.dW == doctest::Approx(pref * pt.bracket).epsilon(1e-12));
    CHECK(pt.intensity() == pt.omega * pt.dW);
    CHECK(std::abs(pt.delta_final - ctx.initial.delta) < 1e-3);

    const auto fwd = differential_probability(ctx, 2, EmissionGeometry(0.0));
    CHECK(fwd.alpha == 0.0);

    CHECK_THROWS_AS(differential_probability(ctx, 0, EmissionGeometry(0.0)), DomainError);
}

TEST_CASE("recoil beyond the quasienergy is a kinematics error") {
    const auto p = ParticleState::on_level(si, Species::positron, 50e6, 0);
    const double Omega = oscillator_frequency(si, p);
    const EmissionContext ctx(p, LaserWave(2 * Omega, 0.1), si);
    CHECK_THROWS_AS(differential_probability(ctx, 2000, EmissionGeometry(0.0)), KinematicsError);
}

TEST_CASE("vanishing resonance parameter leaves a negative bracket") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> n(1, 6);
    std::uniform_real_distribution<double> a(-3.0, 3.0);
    std::uniform_real_distribution<double> b(-1.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const auto L = lambda_all(n(rng), a(rng), b(rng));
        if (std::abs(L.l0) < 1e-6) continue;
        CHECK(resonant_bracket(L, 0.0) == -L.l0 * L.l0);
        CHECK(resonant_bracket(L, 1e-4) < 0.0);
    }

    // the scan keeps such points but flags them
    const auto ctx = resonant_context(50e6, 0.05, 1e-6);
    ScanGrid grid;
    grid.N = {1, 2, 3};
    for (int i = 0; i <= 20; ++i) grid.theta.push_back(i * 5e-4);
    grid.phi = {0.0, 0.7};
    for (const auto& pt : spectrum_scan(ctx, grid)) {
        CHECK(pt.valid == (pt.bracket >= 0.0));
        if (!pt.valid) CHECK(pt.dW == 0.0);
    }
}

TEST_CASE("resonance parameter enhancement") {
    // same Lambda terms, delta 0.1 -> 0.01 scales the multiphoton weight by 100
    const LambdaTriple L{0.0, 0.4, 0.1};
    CHECK(resonant_bracket(L, 0.3 / (2 * 0.01)) / resonant_bracket(L, 0.3 / (2 * 0.1)) ==
          doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("phi reflection symmetry") {
    const auto ctx = resonant_context(60e6, 0.08, 0.9);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> th(0.0, 5e-3);
    std::uniform_real_distribution<double> ph(0.0, constants::pi);
    for (int i = 0; i < 100; ++i) {
        const double t = th(rng), f = ph(rng);
        const auto a = differential_probability(ctx, 1 + i % 3, EmissionGeometry(t, f));
        const auto b = differential_probability(ctx, 1 + i % 3, EmissionGeometry(t, -f));
        CHECK(a.omega == doctest::Approx(b.omega).epsilon(1e-14));
        CHECK(std::abs(a.dW - b.dW) <= 1e-10 * std::abs(a.dW) + 1e-300);
        CHECK(a.valid == b.valid);
    }
}

TEST_CASE("scan bookkeeping") {
    const auto ctx = resonant_context(50e6, 0.05, 0.5, 1);
    ScanGrid empty;
    empty.theta = {0.0};
    CHECK(spectrum_scan(ctx, empty).empty());

    ScanGrid grid;
    grid.N = {1, 2, 3, 4};
    grid.ds = {-2, -1, 0, 1, 2};
    for (int i = 0; i <= 30; ++i) grid.theta.push_back(i * 3e-4);
    grid.phi = {0.0, 0.5, 1.0};
    const auto one = spectrum_scan(ctx, grid, 1);
    const auto many = spectrum_scan(ctx, grid, 6);
    REQUIRE(one.size() == many.size());
    // s = s0 - ds = 1 - 2 < 0 is skipped
    CHECK(one.size() == 4 * 4 * 31 * 3);
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].dW == many[i].dW);
        CHECK(one[i].omega == many[i].omega);
        CHECK(one[i].status == many[i].status);
        CHECK((one[i].dW >= 0.0));
        if (one[i].status == PointStatus::ok) CHECK(one[i].valid);
        if (one[i].valid) CHECK(one[i].bracket >= 0.0);
    }
    CHECK(std::none_of(one.begin(), one.end(), [](const SpectralPoint& p) { return p.ds == 2; }));

    ScanGrid single;
    single.N = {3};
    single.theta = {1.2e-3};
    single.phi = {0.25};
    const auto s = spectrum_scan(ctx, single);
    REQUIRE(s.size() == 1);
    const auto direct = differential_probability(ctx, 3, EmissionGeometry(1.2e-3, 0.25));
    CHECK(s[0].dW == direct.dW);
    CHECK(s[0].omega == direct.omega);

    for (int N : grid.N) {
        double best = -1.0, best_theta = -1.0;
        for (const auto& p : one)
            if (p.N == N && p.ds == 0 && p.omega > best) best = p.omega, best_theta = p.theta;
        CHECK(best_theta == 0.0);
    }
}
