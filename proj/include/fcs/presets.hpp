#pragma once

#include <numbers>

#include "fcs/config.hpp"

namespace fcs {

// Four equal channels behind a resonant barrier, three packets injected
// through channels 1 and 2 with staggered delays (0, tau/2, tau). Packet
// energy width equals the resonance width, center energy sits on the
// resonance, and the sweep covers delays out to 40 lifetimes.
inline ExperimentConfig resonant_preset() {
    ExperimentConfig cfg;
    cfg.channels.assign(4, ChannelSpec{});
    for (int k = 0; k < 4; ++k) {
        cfg.channels[k].index = k;
        cfg.channels[k].threshold = 9.0;
    }

    BreitWigner bw;
    bw.resonance_energy = 18.0;
    bw.width = 0.05;
    cfg.scatterer = bw;

    const double p0 = 3.0 * std::numbers::pi;
    const double sigma_p = momentum_width_for_energy_width(bw.width, p0);
    WavePacketMode base;
    base.center_momentum = p0;
    base.momentum_width = sigma_p;

    WavePacketMode m1 = base, m2 = base, m3 = base;
    m1.channel = 0;
    m2.channel = 1;
    m2.delay_factor = 0.5;
    m3.channel = 1;
    m3.delay_factor = 1.0;
    cfg.modes = {m1, m2, m3};

    cfg.sweep = SweepGrid{0.0, 40.0 / bw.width, 161};
    return cfg;
}

// Two packets on a balanced beam splitter, one delayed by tau. The textbook
// two-particle interference setup: useful as a smoke test with known closed
// forms (bosons never split one each way, fermions always do).
inline ExperimentConfig beam_splitter_preset() {
    ExperimentConfig cfg;
    cfg.channels.assign(2, ChannelSpec{});
    cfg.channels[1].index = 1;

    const double s = 1.0 / std::numbers::sqrt2;
    ComplexMatrix u{{cd(s, 0.0), cd(0.0, s)}, {cd(0.0, s), cd(s, 0.0)}};
    cfg.scatterer = ConstantUnitary{std::move(u)};

    WavePacketMode m1, m2;
    m1.channel = 0;
    m2.channel = 1;
    m2.delay_factor = 1.0;
    m1.center_momentum = m2.center_momentum = 2.0 * std::numbers::pi;
    m1.momentum_width = m2.momentum_width = m1.center_momentum / 40.0;
    cfg.modes = {m1, m2};

    cfg.sweep = SweepGrid{0.0, 25.0, 101};
    return cfg;
}

} // namespace fcs
