#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "fcs/channels.hpp"
#include "fcs/linalg.hpp"
#include "fcs/matrix.hpp"
#include "fcs/quadrature.hpp"
#include "fcs/scatterer.hpp"
#include "fcs/wavepacket.hpp"

namespace fcs {

// Everything in this module reduces to Gram matrices of the energy-
// normalized mode amplitudes
//
//   a_i(E) = A_i(p_k(E)) / sqrt(v_k(E)) * exp(i p_k(E) x_i) * exp(i E t_i)
//
// evaluated on a shared quadrature grid:
//
//   input(i, j)       = sum_E w_E a_i conj(a_j)            (same channel only)
//   outgoing(m)(i, j) = sum_E w_E [S_mk_i a_i] conj[S_mk_j a_j]
//
// Working in the energy representation makes the completeness identity
// sum_m outgoing(m) = input an exact consequence of S-matrix unitarity at
// each node, for equal and unequal thresholds alike, and makes every
// matrix positive semidefinite by construction. The phase convention
// attaches exp(i p x_in) exp(i E t_in) to a mode on both the incoming and
// outgoing sides; this is the unique choice under which the outgoing packet
// leaves the scatterer at the moment the incoming one arrives, and it is
// what makes the completeness identity hold.

struct ModeRef {
    int original_index = 0; // position in the caller's mode list
    int channel = 0;
    double time = 0.0;      // materialized injection time
};

struct QuadratureReport {
    int nodes = 0;               // node count of the accepted (doubled) pass
    double doubling_residual = 0.0;
    double unitarity_residual = 0.0;
    double energy_lo = 0.0, energy_hi = 0.0;
};

struct OverlapSet {
    ComplexMatrix input;                 // J x J
    std::vector<ComplexMatrix> outgoing; // N matrices, J x J each
    std::vector<WavePacketMode> modes;   // sorted by (channel, time), times materialized
    std::vector<ModeRef> mode_order;
    std::vector<ChannelSpec> channels;
    QuadratureReport report;
};

namespace detail {

inline std::vector<WavePacketMode> sorted_modes(const std::vector<WavePacketMode>& modes,
                                                double tau, std::vector<ModeRef>* order) {
    std::vector<int> idx(modes.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        const auto& ma = modes[a];
        const auto& mb = modes[b];
        if (ma.channel != mb.channel) return ma.channel < mb.channel;
        return ma.effective_time(tau) < mb.effective_time(tau);
    });
    std::vector<WavePacketMode> out;
    out.reserve(modes.size());
    if (order) order->clear();
    for (int i : idx) {
        WavePacketMode m = modes[i];
        m.inject_time = m.effective_time(tau);
        m.delay_factor = 0.0;
        out.push_back(m);
        if (order) order->push_back({i, m.channel, m.inject_time});
    }
    return out;
}

struct EnergyWindow {
    double lo = 0.0, hi = 0.0;
    double span_phase = 0.0; // worst-case oscillation across the window, radians
};

inline EnergyWindow energy_window(const std::vector<WavePacketMode>& modes,
                                  const std::vector<ChannelSpec>& channels,
                                  const ScattererModel* scatterer, double half_widths) {
    EnergyWindow w;
    w.lo = std::numeric_limits<double>::infinity();
    w.hi = -w.lo;
    for (const auto& m : modes) {
        const ChannelSpec& ch = channels[m.channel];
        const double plo = std::max(m.center_momentum - half_widths * m.momentum_width,
                                    1e-3 * m.center_momentum);
        const double phi = m.center_momentum + half_widths * m.momentum_width;
        w.lo = std::min(w.lo, total_energy(plo, ch));
        w.hi = std::max(w.hi, total_energy(phi, ch));
    }
    for (const auto& ch : channels)
        if (w.lo <= ch.threshold)
            throw domain_error("channel " + std::to_string(ch.index) +
                               " is closed inside the packet support");

    double dt = 0.0, dx = 0.0;
    for (std::size_t i = 0; i < modes.size(); ++i)
        for (std::size_t j = i + 1; j < modes.size(); ++j) {
            dt = std::max(dt, std::abs(modes[i].inject_time - modes[j].inject_time));
            dx = std::max(dx, std::abs(modes[i].inject_position - modes[j].inject_position));
        }
    double dp = 0.0;
    for (const auto& ch : channels)
        dp = std::max(dp, *momentum_in_channel(w.hi, ch) - *momentum_in_channel(w.lo, ch));
    w.span_phase = (w.hi - w.lo) * dt + dp * dx;
    if (scatterer) {
        // Resolve the pole structure even for synchronized injections.
        if (const auto pw = pole_width(*scatterer)) w.span_phase += (w.hi - w.lo) / (0.5 * *pw);
    }
    return w;
}

inline int node_budget(const EnergyWindow& w, const QuadratureSettings& q) {
    const double raw = q.base_nodes * q.scale * (1.0 + w.span_phase / std::numbers::pi);
    long n = std::lround(std::ceil(raw));
    n = std::max<long>(n, 64);
    if (n % 2) ++n;
    if (n > (1L << 21))
        throw convergence_error("quadrature node budget exceeds 2^21; sweep span too large");
    return int(n);
}

struct RawOverlaps {
    ComplexMatrix input;
    std::vector<ComplexMatrix> outgoing;
};

inline RawOverlaps accumulate_overlaps(const std::vector<WavePacketMode>& modes,
                                       const std::vector<ChannelSpec>& channels,
                                       const ScattererModel* scatterer,
                                       const GaussLegendreRule& rule) {
    const std::size_t J = modes.size();
    const std::size_t N = channels.size();
    RawOverlaps out;
    out.input = ComplexMatrix(J, J);
    if (scatterer) out.outgoing.assign(N, ComplexMatrix(J, J));

    std::vector<cd> a(J), b(J);
    std::vector<double> p(N), v(N);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double e = rule.nodes[q];
        const double w = rule.weights[q];
        for (std::size_t k = 0; k < N; ++k) {
            p[k] = *momentum_in_channel(e, channels[k]);
            v[k] = channel_velocity(p[k]);
        }
        for (std::size_t i = 0; i < J; ++i) {
            const WavePacketMode& m = modes[i];
            const double pk = p[m.channel];
            const double amp = gaussian_amplitude(pk, m) / std::sqrt(v[m.channel]);
            a[i] = amp * std::polar(1.0, pk * m.inject_position + e * m.inject_time);
        }
        for (std::size_t i = 0; i < J; ++i)
            for (std::size_t j = i; j < J; ++j)
                if (modes[i].channel == modes[j].channel)
                    out.input(i, j) += w * a[i] * std::conj(a[j]);
        if (scatterer) {
            const ComplexMatrix s = s_matrix(*scatterer, e, N);
            for (std::size_t m = 0; m < N; ++m) {
                ComplexMatrix& qm = out.outgoing[m];
                for (std::size_t i = 0; i < J; ++i) b[i] = s(m, modes[i].channel) * a[i];
                for (std::size_t i = 0; i < J; ++i)
                    for (std::size_t j = i; j < J; ++j) qm(i, j) += w * b[i] * std::conj(b[j]);
            }
        }
    }

    auto mirror = [J](ComplexMatrix& m) {
        for (std::size_t i = 0; i < J; ++i) {
            m(i, i) = cd(m(i, i).real(), 0.0);
            for (std::size_t j = i + 1; j < J; ++j) m(j, i) = std::conj(m(i, j));
        }
    };
    mirror(out.input);
    for (auto& qm : out.outgoing) mirror(qm);
    return out;
}

inline double raw_residual(const RawOverlaps& a, const RawOverlaps& b) {
    double r = max_abs_diff(a.input, b.input);
    for (std::size_t m = 0; m < a.outgoing.size(); ++m)
        r = std::max(r, max_abs_diff(a.outgoing[m], b.outgoing[m]));
    return r;
}

// Full pipeline: sort modes, budget nodes, verify by node doubling,
// renormalize the mode norms, and check the structural invariants.
inline OverlapSet computed_overlaps(const std::vector<ChannelSpec>& channels,
                                    const std::vector<WavePacketMode>& modes,
                                    const ScattererModel* scatterer,
                                    const QuadratureSettings& quad, double tau) {
    if (modes.empty()) throw config_error("at least one wave packet is required");
    if (channels.empty()) throw config_error("at least one channel is required");
    for (const auto& m : modes) validate_mode(m, int(channels.size()));
    if (scatterer) validate_scatterer(*scatterer, channels.size());

    OverlapSet set;
    set.channels = channels;
    set.modes = detail::sorted_modes(modes, tau, &set.mode_order);

    const EnergyWindow window = energy_window(set.modes, channels, scatterer,
                                              quad.window_half_widths);
    const int n = node_budget(window, quad);

    const GaussLegendreRule coarse_rule = composite_gauss_legendre(n, window.lo, window.hi);
    const GaussLegendreRule fine_rule = composite_gauss_legendre(2 * n, window.lo, window.hi);
    const RawOverlaps coarse = accumulate_overlaps(set.modes, channels, scatterer, coarse_rule);
    RawOverlaps fine = accumulate_overlaps(set.modes, channels, scatterer, fine_rule);

    set.report.nodes = int(fine_rule.nodes.size());
    set.report.energy_lo = window.lo;
    set.report.energy_hi = window.hi;
    set.report.doubling_residual = raw_residual(coarse, fine);
    if (set.report.doubling_residual > quad.convergence_tol)
        throw convergence_error("overlap quadrature did not converge under node doubling "
                                "(residual " + std::to_string(set.report.doubling_residual) +
                                "); raise the node budget");

    const std::size_t J = set.modes.size();
    std::vector<double> d(J);
    for (std::size_t i = 0; i < J; ++i) {
        const double norm = fine.input(i, i).real();
        if (!(norm > 1e-6))
            throw convergence_error("wave packet escapes the quadrature window");
        d[i] = 1.0 / std::sqrt(norm);
    }
    auto rescale = [&](ComplexMatrix& m) {
        for (std::size_t i = 0; i < J; ++i)
            for (std::size_t j = 0; j < J; ++j) m(i, j) *= d[i] * d[j];
    };
    rescale(fine.input);
    for (auto& qm : fine.outgoing) rescale(qm);
    for (std::size_t i = 0; i < J; ++i) fine.input(i, i) = cd(1.0);

    set.input = std::move(fine.input);
    set.outgoing = std::move(fine.outgoing);

    if (scatterer) {
        ComplexMatrix sum(J, J);
        for (const auto& qm : set.outgoing) sum += qm;
        set.report.unitarity_residual = max_abs_diff(sum, set.input);
        if (set.report.unitarity_residual > quad.unitarity_tol)
            throw consistency_error("completeness identity violated: sum of outgoing overlap "
                                    "matrices deviates from the input overlap matrix");
    }
    if (!is_psd(set.input))
        throw consistency_error("input overlap matrix is not positive semidefinite");
    for (const auto& qm : set.outgoing)
        if (!is_psd(qm))
            throw consistency_error("an outgoing overlap matrix is not positive semidefinite");
    return set;
}

} // namespace detail

// Overlap matrix of the incoming modes. Entries connect modes in the same
// channel only; the renormalized diagonal is exactly 1.
inline ComplexMatrix input_overlaps(const std::vector<ChannelSpec>& channels,
                                    const std::vector<WavePacketMode>& modes,
                                    const QuadratureSettings& quad = {}, double tau = 0.0) {
    return detail::computed_overlaps(channels, modes, nullptr, quad, tau).input;
}

// Overlap matrix of the outgoing wave components in channel m.
inline ComplexMatrix outgoing_overlaps(const std::vector<ChannelSpec>& channels,
                                       const std::vector<WavePacketMode>& modes,
                                       const ScattererModel& scatterer, int m,
                                       const QuadratureSettings& quad = {}, double tau = 0.0) {
    if (m < 0 || std::size_t(m) >= channels.size())
        throw range_error("outgoing_overlaps: channel index out of range");
    return detail::computed_overlaps(channels, modes, &scatterer, quad, tau).outgoing[m];
}

// The complete overlap data for one configuration at sweep value tau.
inline OverlapSet overlap_set(const std::vector<ChannelSpec>& channels,
                              const std::vector<WavePacketMode>& modes,
                              const ScattererModel& scatterer,
                              const QuadratureSettings& quad = {}, double tau = 0.0) {
    return detail::computed_overlaps(channels, modes, &scatterer, quad, tau);
}

} // namespace fcs
