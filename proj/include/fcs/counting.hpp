#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "fcs/linalg.hpp"
#include "fcs/overlap.hpp"

namespace fcs {

// Tolerances pinned for the whole counting layer.
inline constexpr double kDegenerateTol = 1e-12;   // |S[input]| below this: null input state
inline constexpr double kRouteAgreementTol = 1e-10;
inline constexpr double kNormalizationTol = 1e-6;
inline constexpr double kNegativeProbabilityFloor = -1e-10;
inline constexpr double kWeightColumnSumTol = 1e-8;
inline constexpr double kUncorrelatedTol = 0.01;  // |input - 1|_max ceiling for asserting bounds
inline constexpr unsigned long long kMaxAssignments = 1ull << 24;

// Number of distinct outcomes (n_1, ..., n_N) with sum J: C(J+N-1, N-1).
inline unsigned long long outcome_count(unsigned J, unsigned N) {
    if (N == 0) throw range_error("outcome_count needs at least one channel");
    unsigned long long k = std::min<unsigned long long>(N - 1, J);
    const unsigned long long n = (unsigned long long)J + N - 1;
    unsigned long long r = 1;
    for (unsigned long long i = 1; i <= k; ++i) {
        unsigned long long tmp;
        if (__builtin_mul_overflow(r, n - k + i, &tmp))
            throw range_error("outcome_count overflows 64 bits");
        r = tmp / i; // exact: r accumulates C(n-k+i, i)
    }
    return r;
}

// Full counting statistics of one configuration. Probabilities are stored
// raw (they may carry a negative rounding residue down to -1e-10); use
// clipped() for reporting.
struct CountingDistribution {
    StatisticsKind kind = StatisticsKind::Boson;
    std::size_t num_channels = 0;
    std::size_t num_particles = 0;
    std::map<std::vector<int>, double> prob;
    double norm_residual = 0.0;
    double max_imag = 0.0;

    double probability(const std::vector<int>& n) const {
        const auto it = prob.find(n);
        return it == prob.end() ? 0.0 : it->second;
    }
    double clipped(const std::vector<int>& n) const { return std::max(0.0, probability(n)); }
};

// Classical per-particle channel weights w(m, i) = outgoing(m)(i, i).
struct DpWeights {
    std::size_t num_channels = 0;
    std::size_t num_particles = 0;
    std::vector<double> w; // row-major, w[m * J + i]

    double at(std::size_t m, std::size_t i) const { return w[m * num_particles + i]; }
};

inline DpWeights dp_weights(const OverlapSet& ov) {
    DpWeights dw;
    dw.num_channels = ov.outgoing.size();
    dw.num_particles = ov.modes.size();
    dw.w.resize(dw.num_channels * dw.num_particles);
    for (std::size_t m = 0; m < dw.num_channels; ++m)
        for (std::size_t i = 0; i < dw.num_particles; ++i)
            dw.w[m * dw.num_particles + i] = ov.outgoing[m](i, i).real();
    for (std::size_t i = 0; i < dw.num_particles; ++i) {
        double colsum = 0.0;
        for (std::size_t m = 0; m < dw.num_channels; ++m) colsum += dw.at(m, i);
        if (std::abs(colsum - 1.0) > kWeightColumnSumTol)
            throw consistency_error("per-particle channel weights do not sum to 1");
    }
    return dw;
}

namespace detail {

inline CountingDistribution finalize_distribution(StatisticsKind kind, std::size_t N,
                                                  std::size_t J,
                                                  std::map<std::vector<int>, double> raw,
                                                  double max_imag) {
    CountingDistribution dist;
    dist.kind = kind;
    dist.num_channels = N;
    dist.num_particles = J;
    dist.prob = std::move(raw);
    dist.max_imag = max_imag;
    double sum = 0.0;
    for (const auto& [n, w] : dist.prob) {
        if (w < kNegativeProbabilityFloor)
            throw consistency_error("a probability fell below the -1e-10 rounding floor");
        sum += w;
    }
    dist.norm_residual = std::abs(sum - 1.0);
    if (dist.norm_residual > kNormalizationTol)
        throw consistency_error("counting distribution does not sum to 1 within 1e-6");
    return dist;
}

inline std::map<std::vector<int>, double> dp_distribution_map(const DpWeights& dw) {
    const std::size_t N = dw.num_channels, J = dw.num_particles;
    std::map<std::vector<int>, double> poly;
    poly[std::vector<int>(N, 0)] = 1.0;
    for (std::size_t i = 0; i < J; ++i) {
        std::map<std::vector<int>, double> next;
        for (const auto& [occ, val] : poly)
            for (std::size_t m = 0; m < N; ++m) {
                std::vector<int> occ2 = occ;
                ++occ2[m];
                next[occ2] += val * dw.at(m, i);
            }
        poly = std::move(next);
    }
    return poly;
}

inline cd checked_input_functional(const OverlapSet& ov, StatisticsKind kind) {
    const cd s = stat_functional(ov.input, kind);
    if (std::abs(s) <= kDegenerateTol)
        throw degenerate_input_error("input state is null for this statistics kind "
                                     "(overlap functional vanished)");
    return s;
}

template <typename Fn>
inline void for_each_assignment(std::size_t N, std::size_t J, Fn&& fn) {
    std::vector<int> c(J, 0);
    for (;;) {
        fn(c);
        std::size_t pos = 0;
        while (pos < J) {
            if (++c[pos] < int(N)) break;
            c[pos] = 0;
            ++pos;
        }
        if (pos == J) break;
    }
}

} // namespace detail

// Probability of every outcome (n_1, ..., n_N). For identical particles the
// generating functional is multilinear in the rows of sum_m alpha_m Q(m), so
// each ordered channel assignment (c_1, ..., c_J) contributes the statistics
// functional of the matrix whose i-th row is row i of Q(c_i); grouping the
// N^J assignments by occupation yields the distribution. Distinguishable
// particles factorize into per-particle weights, multiplied out occupation
// by occupation.
inline CountingDistribution full_distribution(const OverlapSet& ov, StatisticsKind kind) {
    const std::size_t J = ov.modes.size();
    const std::size_t N = ov.outgoing.size();

    if (kind == StatisticsKind::Distinguishable) {
        return detail::finalize_distribution(kind, N, J,
                                             detail::dp_distribution_map(dp_weights(ov)), 0.0);
    }

    unsigned long long assignments = 1;
    for (std::size_t i = 0; i < J; ++i) {
        assignments *= N;
        if (assignments > kMaxAssignments)
            throw range_error("full_distribution: N^J assignment expansion too large");
    }

    const cd s_in = detail::checked_input_functional(ov, kind);
    std::map<std::vector<int>, cd> acc;
    ComplexMatrix mixed(J, J);
    std::vector<int> occ(N);
    detail::for_each_assignment(N, J, [&](const std::vector<int>& c) {
        for (std::size_t i = 0; i < J; ++i) mixed.set_row(i, ov.outgoing[c[i]], i);
        std::fill(occ.begin(), occ.end(), 0);
        for (int ci : c) ++occ[ci];
        acc[occ] += stat_functional(mixed, kind);
    });

    std::map<std::vector<int>, double> raw;
    double max_imag = 0.0;
    for (const auto& [n, z] : acc) {
        const cd w = z / s_in;
        max_imag = std::max(max_imag, std::abs(w.imag()));
        raw[n] = w.real();
    }
    return detail::finalize_distribution(kind, N, J, std::move(raw), max_imag);
}

// Distribution of the particle count in channel m, indexed 0..J. Computed
// by summing the full distribution; for identical particles the result is
// recomputed independently through row-subset functionals of the matrix
// that replaces rows of (input - Q(m)) with rows of Q(m), and the two
// routes must agree to 1e-10.
inline std::vector<double> single_channel_marginal(const OverlapSet& ov,
                                                   const CountingDistribution& dist, int m) {
    const std::size_t J = dist.num_particles;
    const std::size_t N = dist.num_channels;
    if (m < 0 || std::size_t(m) >= N) throw range_error("marginal channel index out of range");

    std::vector<double> route1(J + 1, 0.0);
    for (const auto& [n, w] : dist.prob) route1[n[m]] += w;

    if (dist.kind != StatisticsKind::Distinguishable) {
        const cd s_in = detail::checked_input_functional(ov, dist.kind);
        ComplexMatrix base = ov.input;
        base -= ov.outgoing[m];
        std::vector<cd> route2(J + 1, cd(0.0));
        ComplexMatrix work(J, J);
        const std::uint64_t end = std::uint64_t(1) << J;
        for (std::uint64_t mask = 0; mask < end; ++mask) {
            for (std::size_t i = 0; i < J; ++i)
                work.set_row(i, (mask >> i) & 1 ? ov.outgoing[m] : base, i);
            route2[std::popcount(mask)] += stat_functional(work, dist.kind);
        }
        for (std::size_t n = 0; n <= J; ++n) {
            const double v = (route2[n] / s_in).real();
            if (std::abs(v - route1[n]) > kRouteAgreementTol)
                throw consistency_error("single-channel marginal routes disagree beyond 1e-10");
        }
    }
    return route1;
}

// Mean channel occupations from the distribution.
inline std::vector<double> mean_numbers(const CountingDistribution& dist) {
    std::vector<double> nbar(dist.num_channels, 0.0);
    for (const auto& [n, w] : dist.prob)
        for (std::size_t m = 0; m < dist.num_channels; ++m) nbar[m] += n[m] * w;
    return nbar;
}

// Mean channel occupations straight from the overlap matrices: replace one
// row of the input matrix at a time with the corresponding row of Q(m) and
// sum the statistics functionals. Distinguishable means are plain weight
// sums.
inline std::vector<double> mean_numbers_direct(const OverlapSet& ov, StatisticsKind kind) {
    const std::size_t J = ov.modes.size();
    const std::size_t N = ov.outgoing.size();
    std::vector<double> nbar(N, 0.0);
    if (kind == StatisticsKind::Distinguishable) {
        const DpWeights dw = dp_weights(ov);
        for (std::size_t m = 0; m < N; ++m)
            for (std::size_t i = 0; i < J; ++i) nbar[m] += dw.at(m, i);
        return nbar;
    }
    const cd s_in = detail::checked_input_functional(ov, kind);
    ComplexMatrix work = ov.input;
    for (std::size_t m = 0; m < N; ++m) {
        cd sum(0.0);
        for (std::size_t l = 0; l < J; ++l) {
            work.set_row(l, ov.outgoing[m], l);
            sum += stat_functional(work, kind);
            work.set_row(l, ov.input, l); // restore
        }
        nbar[m] = (sum / s_in).real();
    }
    return nbar;
}

// Means with the two routes cross-checked to 1e-10.
inline std::vector<double> checked_mean_numbers(const OverlapSet& ov,
                                                const CountingDistribution& dist) {
    const std::vector<double> route1 = mean_numbers(dist);
    const std::vector<double> route2 = mean_numbers_direct(ov, dist.kind);
    for (std::size_t m = 0; m < route1.size(); ++m)
        if (std::abs(route1[m] - route2[m]) > kRouteAgreementTol)
            throw consistency_error("mean occupation routes disagree beyond 1e-10");
    return route1;
}

// Probability that the listed channels carry exactly the listed counts
// (other channels unconstrained). The all-zero case is recomputed for
// identical particles as the functional of input minus the selected
// outgoing matrices.
inline double joint_probability(const OverlapSet& ov, const CountingDistribution& dist,
                                const std::vector<int>& channels,
                                const std::vector<int>& counts) {
    if (channels.size() != counts.size())
        throw dimension_error("joint_probability: channels/counts size mismatch");
    std::vector<int> seen;
    for (int m : channels) {
        if (m < 0 || std::size_t(m) >= dist.num_channels)
            throw range_error("joint_probability: channel index out of range");
        if (std::find(seen.begin(), seen.end(), m) != seen.end())
            throw range_error("joint_probability: duplicate channel");
        seen.push_back(m);
    }
    for (int c : counts)
        if (c < 0 || std::size_t(c) > dist.num_particles)
            throw range_error("joint_probability: count out of range");

    double route1 = 0.0;
    for (const auto& [n, w] : dist.prob) {
        bool match = true;
        for (std::size_t k = 0; k < channels.size(); ++k)
            if (n[channels[k]] != counts[k]) { match = false; break; }
        if (match) route1 += w;
    }

    const bool all_zero = std::all_of(counts.begin(), counts.end(), [](int c) { return c == 0; });
    if (all_zero && !channels.empty() && dist.kind != StatisticsKind::Distinguishable) {
        const cd s_in = detail::checked_input_functional(ov, dist.kind);
        ComplexMatrix r = ov.input;
        for (int m : channels) r -= ov.outgoing[m];
        const double route2 = (stat_functional(r, dist.kind) / s_in).real();
        if (std::abs(route1 - route2) > kRouteAgreementTol)
            throw consistency_error("no-particle joint probability routes disagree beyond 1e-10");
    }
    return route1;
}

// One audited bound: either the all-particles probability of a single
// channel or the no-particles probability of a channel subset, for the
// three statistics kinds. Margins are boson - dp and dp - fermion; both
// are nonnegative theorems for uncorrelated inputs.
struct InequalityEntry {
    std::vector<int> channels;
    bool all_particles = false;
    double boson = std::numeric_limits<double>::quiet_NaN();
    double fermion = std::numeric_limits<double>::quiet_NaN();
    double dp = std::numeric_limits<double>::quiet_NaN();
    double boson_margin = std::numeric_limits<double>::quiet_NaN();
    double fermion_margin = std::numeric_limits<double>::quiet_NaN();

    bool holds() const {
        const bool b = !(boson_margin < 0.0);   // NaN counts as not violated
        const bool f = !(fermion_margin < 0.0);
        return b && f;
    }
};

struct InequalityReport {
    double input_offdiag_max = 0.0;
    bool uncorrelated = false;
    bool asserted = false;
    bool fermion_defined = true;
    std::vector<InequalityEntry> entries;

    bool all_hold() const {
        return std::all_of(entries.begin(), entries.end(),
                           [](const InequalityEntry& e) { return e.holds(); });
    }
};

// Audits the bunching/anti-bunching bounds: for every channel the
// all-particles and no-particles probabilities, and for every proper
// channel subset the joint no-particles probability, ordered
// boson >= distinguishable >= fermion. In the uncorrelated regime
// (|input - 1|_max <= 0.01) a violated bound throws; otherwise the bounds
// are only reported, since they are not theorems for overlapping inputs.
inline InequalityReport inequality_audit(const OverlapSet& ov,
                                         double uncorrelated_tol = kUncorrelatedTol) {
    const std::size_t J = ov.modes.size();
    const std::size_t N = ov.outgoing.size();
    InequalityReport report;
    report.input_offdiag_max = ov.input.max_abs_offdiag();
    report.uncorrelated = report.input_offdiag_max <= uncorrelated_tol;
    report.asserted = report.uncorrelated;

    const cd per_in = permanent(ov.input);
    const cd det_in = determinant(ov.input);
    report.fermion_defined = std::abs(det_in) > kDegenerateTol;
    const DpWeights dw = dp_weights(ov);

    auto push = [&](std::vector<int> chans, bool all_particles, const ComplexMatrix& mat,
                    double dp_value) {
        InequalityEntry e;
        e.channels = std::move(chans);
        e.all_particles = all_particles;
        e.dp = dp_value;
        e.boson = (permanent(mat) / per_in).real();
        e.boson_margin = e.boson - e.dp;
        if (report.fermion_defined) {
            e.fermion = (determinant(mat) / det_in).real();
            e.fermion_margin = e.dp - e.fermion;
        }
        report.entries.push_back(std::move(e));
    };

    for (std::size_t m = 0; m < N; ++m) {
        double prod = 1.0;
        for (std::size_t i = 0; i < J; ++i) prod *= dw.at(m, i);
        push({int(m)}, true, ov.outgoing[m], prod);
    }

    // Proper nonempty channel subsets, smallest first.
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t(1) << N); ++mask) {
        std::vector<int> subset;
        for (std::size_t m = 0; m < N; ++m)
            if ((mask >> m) & 1) subset.push_back(int(m));
        ComplexMatrix r = ov.input;
        double prod = 1.0;
        for (std::size_t i = 0; i < J; ++i) {
            double drained = 0.0;
            for (int m : subset) drained += dw.at(m, i);
            prod *= 1.0 - drained;
        }
        for (int m : subset) r -= ov.outgoing[m];
        push(subset, false, r, prod);
    }
    std::stable_sort(report.entries.begin(), report.entries.end(),
                     [](const InequalityEntry& a, const InequalityEntry& b) {
                         if (a.all_particles != b.all_particles) return a.all_particles;
                         if (a.channels.size() != b.channels.size())
                             return a.channels.size() < b.channels.size();
                         return a.channels < b.channels;
                     });

    if (report.asserted) {
        for (const auto& e : report.entries)
            if (!e.holds())
                throw inequality_violation_error(
                    "a bunching bound failed in the uncorrelated regime (channel subset size " +
                    std::to_string(e.channels.size()) + ")");
    }
    return report;
}

// Independent reconstruction of the full distribution: evaluate the
// generating function on the (J+1)-th roots of unity and invert the
// discrete Fourier transform. Exact for polynomials of per-channel degree
// at most J, which the generating function is.
inline CountingDistribution distribution_via_dft(const OverlapSet& ov, StatisticsKind kind) {
    const std::size_t J = ov.modes.size();
    const std::size_t N = ov.outgoing.size();
    if (J > 8 || N > 6)
        throw range_error("distribution_via_dft supports J <= 8 and N <= 6");

    // All occupations with sum J, and the root-of-unity powers.
    std::vector<std::vector<int>> occupations;
    std::vector<int> occ(N, 0);
    auto gen = [&](auto&& self, std::size_t m, int left) -> void {
        if (m + 1 == N) {
            occ[m] = left;
            occupations.push_back(occ);
            return;
        }
        for (int v = 0; v <= left; ++v) {
            occ[m] = v;
            self(self, m + 1, left - v);
        }
    };
    gen(gen, 0, int(J));

    const std::size_t order = J + 1;
    std::vector<cd> omega(order);
    for (std::size_t k = 0; k < order; ++k)
        omega[k] = std::polar(1.0, 2.0 * std::numbers::pi * double(k) / double(order));

    const bool dp = kind == StatisticsKind::Distinguishable;
    const DpWeights dw = dp ? dp_weights(ov) : DpWeights{};
    const cd s_in = dp ? cd(1.0) : detail::checked_input_functional(ov, kind);

    std::map<std::vector<int>, cd> acc;
    for (const auto& n : occupations) acc[n] = cd(0.0);

    std::vector<int> r(N, 0);
    ComplexMatrix t(J, J);
    for (;;) {
        cd g;
        if (dp) {
            g = cd(1.0);
            for (std::size_t i = 0; i < J; ++i) {
                cd term(0.0);
                for (std::size_t m = 0; m < N; ++m) term += omega[r[m]] * dw.at(m, i);
                g *= term;
            }
        } else {
            t = ComplexMatrix(J, J);
            for (std::size_t m = 0; m < N; ++m) t.axpy(omega[r[m]], ov.outgoing[m]);
            g = stat_functional(t, kind) / s_in;
        }
        for (auto& [n, sum] : acc) {
            std::size_t dot = 0;
            for (std::size_t m = 0; m < N; ++m) dot += std::size_t(r[m]) * std::size_t(n[m]);
            sum += g * std::conj(omega[dot % order]);
        }
        std::size_t pos = 0;
        while (pos < N) {
            if (++r[pos] < int(order)) break;
            r[pos] = 0;
            ++pos;
        }
        if (pos == N) break;
    }

    double grid = 1.0;
    for (std::size_t m = 0; m < N; ++m) grid *= double(order);
    std::map<std::vector<int>, double> raw;
    double max_imag = 0.0;
    for (const auto& [n, z] : acc) {
        const cd w = z / grid;
        max_imag = std::max(max_imag, std::abs(w.imag()));
        raw[n] = w.real();
    }
    return detail::finalize_distribution(kind, N, J, std::move(raw), max_imag);
}

} // namespace fcs
