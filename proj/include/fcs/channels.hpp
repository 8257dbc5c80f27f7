#pragma once

#include <cmath>
#include <numbers>
#include <optional>

#include "fcs/errors.hpp"

namespace fcs {

// Working units: hbar = 1, lengths and momenta in natural units, energies
// in units of eps0 = pi^2/(2 mu L^2) (the box quantum for guide width L),
// times in 1/eps0. In these scaled units the kinetic energy of momentum p
// is (p/pi)^2 regardless of mu, so the common mass only fixes the absolute
// scale of eps0 and never enters the scattering pipeline.

inline double epsilon0(double mu = 1.0, double L = 1.0) {
    return std::numbers::pi * std::numbers::pi / (2.0 * mu * L * L);
}

struct ChannelSpec {
    int index = 0;          // identifying label, 0-based
    double threshold = 0.0; // E_k^0 in units of eps0
    double mass = 1.0;      // shared by all channels
};

// Kinetic energy in units of eps0.
inline double kinetic_energy(double p) {
    const double r = p / std::numbers::pi;
    return r * r;
}

inline double total_energy(double p, const ChannelSpec& ch) {
    return kinetic_energy(p) + ch.threshold;
}

// dE/dp in the scaled units.
inline double channel_velocity(double p) {
    return 2.0 * p / (std::numbers::pi * std::numbers::pi);
}

// Momentum in a channel at total energy e_total, or nullopt when the
// channel is closed (e_total at or below the threshold).
inline std::optional<double> momentum_in_channel(double e_total, const ChannelSpec& ch) {
    if (e_total <= ch.threshold) return std::nullopt;
    return std::numbers::pi * std::sqrt(e_total - ch.threshold);
}

// Two-quantum excitation energy (l^2 + l'^2) * pi^2/(2 mu L^2) of the well
// hosting the scatterer, in absolute units.
inline double resonance_energy(int l, int lprime, double L = 1.0, double mu = 1.0) {
    if (l < 1 || lprime < 1) throw domain_error("resonance_energy: quantum numbers start at 1");
    return double(l * l + lprime * lprime) * epsilon0(mu, L);
}

} // namespace fcs
