#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "chanqed/laser.hpp"
#include "chanqed/specfun.hpp"

namespace chanqed {

/// Photon direction: theta from the +z beam axis, phi from the x (polarization) axis.
class EmissionGeometry {
public:
    EmissionGeometry(double theta, double phi = 0.0);

    double theta() const { return theta_; }
    double phi() const { return phi_; }
    std::array<double, 3> direction() const { return dir_; }
    double k_x(double omega) const { return omega * dir_[0]; }
    double k_y(double omega) const { return omega * dir_[1]; }
    double k_z(double omega) const { return omega * dir_[2]; }

private:
    double theta_;
    double phi_;
    std::array<double, 3> dir_;
};

/// l > 0: net absorption of l laser photons, l < 0: emission into the wave.
struct EmissionChannel {
    int l;
    int s0 = 0;
    int s = 0;
};

struct MeanVelocity {
    double v_y;
    double v_z;
};

/// Pi_parallel / Pi. Throws KinematicsError if the result is not subluminal.
MeanVelocity mean_velocity(const DressedState& ds);

/// Photon energy fixed by the quasimomentum / quasienergy conservation laws, recoil
/// neglected. Empty when the channel is kinematically forbidden (omega < 0).
std::optional<double> emitted_frequency(const DressedState& ds, const LaserWave& w, double Omega,
                                        const EmissionChannel& channel, const EmissionGeometry& geom);

struct AlphaBeta {
    double alpha;
    double beta;
};

/// Arguments of Lambda_r for the resonant probability, built from the detunings
/// delta0 (initial) and delta_f (final):
///   Delta = Omega^2 d_f (2 + d_f), Delta0 = Omega^2 d0 (2 + d0),
///   omega0~ omega~ - Omega^2 = Omega^2 (d0 + d_f + d0 d_f).
AlphaBeta alpha_beta(const DressedState& initial, const DressedState& final_state, double xi, double k_x);

enum class PointStatus { ok, negative_bracket, forbidden, kinematics_error, pole, numeric_error };
const char* to_string(PointStatus s);

struct SpectralPoint {
    int N = 0;
    int ds = 0;  // s0 - s
    double theta = 0.0;
    double phi = 0.0;
    double omega = 0.0;
    double dW = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double delta_final = 0.0;
    double bracket = 0.0;
    PointStatus status = PointStatus::ok;
    bool valid = false;

    double intensity() const { return omega * dW; }
};

/// -L0^2 + R^2 (L1^2 - L0 L2), R = xi / (2 delta0).
double resonant_bracket(const LambdaTriple& L, double resonance_parameter);

/// Everything that stays fixed across a spectrum scan.
struct EmissionContext {
    ParticleState particle;
    LaserWave laser;
    ChannelModel channel;
    double Omega;
    DressedState initial;
    QuadratureOptions quadrature{};

    EmissionContext(const ParticleState& p, const LaserWave& w, const ChannelModel& ch,
                    QuadratureOptions quad = {});
};

/// Resonant differential probability per d^3k,
///   dW = m^2 e^2 / (2 pi omega omega0 Pi Pi') [-L0^2 + (xi / 2 delta0)^2 (L1^2 - L0 L2)],
/// at the photon energy of the N-photon channel. A negative bracket yields valid = false
/// with dW = 0. Throws KinematicsError when Pi' <= 0.
SpectralPoint differential_probability(const EmissionContext& ctx, int N, const EmissionGeometry& geom,
                                       int ds = 0);

struct ScanGrid {
    std::vector<int> N;
    std::vector<int> ds{0};
    std::vector<double> theta;
    std::vector<double> phi{0.0};
};

/// Evaluates the grid in N, ds, theta, phi order (phi fastest). Transitions that leave the
/// bound levels are skipped. Per-point failures are recorded in the point status. The result
/// does not depend on the thread count.
std::vector<SpectralPoint> spectrum_scan(const EmissionContext& ctx, const ScanGrid& grid,
                                         unsigned threads = 1);

}  // namespace chanqed
