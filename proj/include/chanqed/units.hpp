#pragma once

// Natural units (hbar = c = 1). Every energy, frequency and momentum is held in eV,
// lengths and times in 1/eV. The charge is in Gaussian units, so e^2 equals the
// fine-structure constant.

#include <cmath>

#include "chanqed/errors.hpp"

namespace chanqed {

namespace constants {
inline constexpr double electron_mass = 510998.95;        // eV
inline constexpr double fine_structure = 7.2973525693e-3;  // e^2 in Gaussian natural units
inline constexpr double hbar_c = 197.326980;               // eV nm
inline constexpr double hbar = 6.582119569e-16;             // eV s
inline constexpr double speed_of_light = 299792458.0;       // m / s
inline constexpr double e_squared = fine_structure;
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

/// A value carrying its power of eV: 1 = energy, -1 = length/time, 0 = dimensionless.
/// Addition only compiles for equal powers; products and quotients add or subtract them.
template <int EvPower>
class Quantity {
public:
    static constexpr int ev_power = EvPower;

    constexpr Quantity() = default;
    constexpr explicit Quantity(double value) : value_(value) {}

    constexpr double value() const { return value_; }

    constexpr Quantity operator-() const { return Quantity(-value_); }
    constexpr Quantity& operator+=(Quantity o) { value_ += o.value_; return *this; }
    constexpr Quantity& operator-=(Quantity o) { value_ -= o.value_; return *this; }
    constexpr Quantity& operator*=(double s) { value_ *= s; return *this; }

    friend constexpr Quantity operator+(Quantity a, Quantity b) { return Quantity(a.value_ + b.value_); }
    friend constexpr Quantity operator-(Quantity a, Quantity b) { return Quantity(a.value_ - b.value_); }
    friend constexpr Quantity operator*(Quantity a, double s) { return Quantity(a.value_ * s); }
    friend constexpr Quantity operator*(double s, Quantity a) { return Quantity(a.value_ * s); }
    friend constexpr Quantity operator/(Quantity a, double s) { return Quantity(a.value_ / s); }
    friend constexpr auto operator<=>(Quantity, Quantity) = default;

private:
    double value_ = 0.0;
};

template <int A, int B>
constexpr Quantity<A + B> operator*(Quantity<A> a, Quantity<B> b) {
    return Quantity<A + B>(a.value() * b.value());
}

template <int A, int B>
constexpr Quantity<A - B> operator/(Quantity<A> a, Quantity<B> b) {
    return Quantity<A - B>(a.value() / b.value());
}

using Energy = Quantity<1>;
using InverseEnergy = Quantity<-1>;
using Dimensionless = Quantity<0>;

constexpr Energy eV(double v) { return Energy(v); }
constexpr Energy MeV(double v) { return Energy(v * 1e6); }

/// hbar * omega for an angular frequency in rad/s.
inline Energy angular_frequency_to_energy(double omega_rad_per_s) {
    if (!(omega_rad_per_s > 0.0)) {
        throw DomainError("angular frequency must be positive");
    }
    return Energy(constants::hbar * omega_rad_per_s);
}

inline double energy_to_angular_frequency(Energy e) { return e.value() / constants::hbar; }

inline InverseEnergy length_from_nm(double nm) { return InverseEnergy(nm / constants::hbar_c); }
inline InverseEnergy length_from_angstrom(double a) { return length_from_nm(0.1 * a); }
inline double length_to_nm(InverseEnergy l) { return l.value() * constants::hbar_c; }

inline InverseEnergy time_from_seconds(double s) { return InverseEnergy(s / constants::hbar); }
inline double time_to_seconds(InverseEnergy t) { return t.value() * constants::hbar; }

inline double lorentz_gamma(double energy, double mass) {
    if (!(mass > 0.0)) {
        throw DomainError("mass must be positive");
    }
    if (!(energy >= mass)) {
        throw DomainError("total energy below rest mass");
    }
    return energy / mass;
}

}  // namespace chanqed
