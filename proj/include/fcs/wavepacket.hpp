#pragma once

#include <cmath>
#include <numbers>

#include "fcs/channels.hpp"
#include "fcs/errors.hpp"

namespace fcs {

// One injected wave packet: a Gaussian momentum profile entering a single
// channel at a given place and time. inject_time may be swept: the
// effective time is inject_time + delay_factor * tau.
struct WavePacketMode {
    int channel = 0;              // 0-based channel index
    double center_momentum = 0.0; // p0 > 0
    double momentum_width = 0.0;  // sigma_p, amplitude ~ exp(-(p-p0)^2/(4 sigma_p^2))
    double inject_position = 0.0;
    double inject_time = 0.0;     // units of 1/eps0
    double delay_factor = 0.0;    // coupling to the sweep parameter tau

    double effective_time(double tau) const { return inject_time + delay_factor * tau; }
};

inline void validate_mode(const WavePacketMode& m, int num_channels) {
    if (m.channel < 0 || m.channel >= num_channels)
        throw config_error("wave packet references a channel that does not exist");
    if (!(m.center_momentum > 0.0))
        throw config_error("wave packet center momentum must be positive");
    if (!(m.momentum_width > 0.0))
        throw config_error("wave packet momentum width must be positive");
    // Keeps the negative-momentum tail negligible so the p > 0 truncation
    // stays a formality.
    if (!(m.momentum_width < m.center_momentum / 4.0))
        throw config_error("wave packet momentum width must satisfy sigma_p < p0/4");
}

// Momentum amplitude of the packet, truncated to p > 0 and normalized so
// that the integral of |A|^2 over (0, inf) is exactly 1: the half-line norm
// uses the closed-form Gaussian tail.
inline double gaussian_amplitude(double p, const WavePacketMode& m) {
    if (p <= 0.0) return 0.0;
    const double s = m.momentum_width;
    const double z = (p - m.center_momentum) / (2.0 * s);
    const double positive_mass = 0.5 * std::erfc(-m.center_momentum / (s * std::numbers::sqrt2));
    const double norm = std::pow(2.0 * std::numbers::pi * s * s, -0.25) / std::sqrt(positive_mass);
    return norm * std::exp(-z * z);
}

// Energy width (units of eps0) of a packet: sigma_E = v0 * sigma_p.
inline double energy_width(const WavePacketMode& m) {
    return channel_velocity(m.center_momentum) * m.momentum_width;
}

// Momentum width that realizes a requested energy width at momentum p0.
inline double momentum_width_for_energy_width(double sigma_e, double p0) {
    return sigma_e / channel_velocity(p0);
}

} // namespace fcs
