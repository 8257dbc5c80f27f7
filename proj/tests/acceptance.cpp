// Acceptance gate: one line per criterion, PASS or FAIL with the measured
// numbers. Exit code is the number of failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fcs/fcs.hpp"
#include "oracles.hpp"

using fcs::StatisticsKind;

namespace {

int failures = 0;

void line(bool ok, const std::string& label, const std::string& detail) {
    if (!ok) ++failures;
    std::cout << (ok ? "PASS" : "FAIL") << "  " << label << ": " << detail << "\n";
}

std::string num(double v) {
    std::ostringstream s;
    s.precision(3);
    s << std::scientific << v;
    return s.str();
}

std::size_t column(const fcs::SweepResult& sweep, const std::string& name) {
    const auto it = std::find(sweep.columns.begin(), sweep.columns.end(), name);
    if (it == sweep.columns.end()) throw std::logic_error("missing sweep column " + name);
    return std::size_t(it - sweep.columns.begin());
}

const std::vector<double> kSampledTaus{10.0, 60.0, 130.0, 250.0, 800.0};
const std::vector<StatisticsKind> kAllKinds{StatisticsKind::Boson, StatisticsKind::Fermion,
                                            StatisticsKind::Distinguishable};

} // namespace

int main() {
    const fcs::ExperimentConfig resonant = fcs::resonant_preset();
    auto resonant_overlaps = [&](double tau) {
        return fcs::overlap_set(resonant.channels, resonant.modes, resonant.scatterer,
                                resonant.quadrature, tau);
    };

    // 1. outcome count for three particles in four channels
    {
        const auto count = fcs::outcome_count(3, 4);
        line(count == 20, "outcome count", "outcome_count(3,4) = " + std::to_string(count) +
                                               ", expected 20");
    }

    // Shared data: distributions at the sampled delays, and the full sweep.
    std::vector<fcs::OverlapSet> sampled;
    for (double tau : kSampledTaus) sampled.push_back(resonant_overlaps(tau));

    // 2. normalization at the sampled delays, every kind
    {
        double worst = 0.0;
        for (const auto& ov : sampled)
            for (StatisticsKind kind : kAllKinds) {
                const auto dist = fcs::full_distribution(ov, kind);
                worst = std::max(worst, dist.norm_residual);
            }
        line(worst <= 1e-6, "normalization",
             "max |sum W - 1| = " + num(worst) + " over 5 delays x 3 kinds (tol 1e-6)");
    }

    // 3. mean occupations: kind-independent once packets decorrelate, and
    //    always summing to the particle number
    {
        double worst_diff = 0.0, worst_sum = 0.0;
        for (const auto& ov : sampled) {
            std::vector<std::vector<double>> means;
            for (StatisticsKind kind : kAllKinds) {
                const auto dist = fcs::full_distribution(ov, kind);
                means.push_back(fcs::checked_mean_numbers(ov, dist));
                double sum = 0.0;
                for (double v : means.back()) sum += v;
                worst_sum = std::max(worst_sum, std::abs(sum - 3.0));
            }
            if (fcs::max_abs_diff_from_identity(ov.input) <= 1e-8)
                for (std::size_t m = 0; m < 4; ++m) {
                    worst_diff = std::max(worst_diff, std::abs(means[0][m] - means[2][m]));
                    worst_diff = std::max(worst_diff, std::abs(means[1][m] - means[2][m]));
                }
        }
        line(worst_diff <= 1e-8 && worst_sum <= 1e-8, "mean invariance",
             "max |mean - dp mean| = " + num(worst_diff) + " when decorrelated, max |sum - 3| = " +
                 num(worst_sum) + " (tol 1e-8)");
    }

    // 4. synchronized balanced splitter: two-particle interference values
    {
        const fcs::ExperimentConfig sp = fcs::beam_splitter_preset();
        const auto ov = fcs::overlap_set(sp.channels, sp.modes, sp.scatterer, sp.quadrature, 0.0);
        const auto boson = fcs::full_distribution(ov, StatisticsKind::Boson);
        const auto fermion = fcs::full_distribution(ov, StatisticsKind::Fermion);
        const auto dp = fcs::full_distribution(ov, StatisticsKind::Distinguishable);

        double oracle_diff = 0.0;
        const auto& u = std::get<fcs::ConstantUnitary>(sp.scatterer).u;
        for (StatisticsKind kind : kAllKinds) {
            const auto dist = fcs::full_distribution(ov, kind);
            for (const auto& [n, w] : oracle::two_particle_reference(u, kind))
                oracle_diff = std::max(oracle_diff, std::abs(dist.probability(n) - w));
        }

        const bool ok = boson.probability({1, 1}) <= 1e-6 &&
                        std::abs(boson.probability({2, 0}) - 0.5) <= 1e-6 &&
                        std::abs(boson.probability({0, 2}) - 0.5) <= 1e-6 &&
                        std::abs(fermion.probability({1, 1}) - 1.0) <= 1e-6 &&
                        std::abs(dp.probability({1, 1}) - 0.5) <= 1e-12;
        line(ok, "two-particle interference",
             "boson W(1,1) = " + num(boson.probability({1, 1})) + ", W(2,0) = " +
                 num(boson.probability({2, 0})) + ", fermion W(1,1) = " +
                 num(fermion.probability({1, 1})) + ", dp W(1,1) = " +
                 num(dp.probability({1, 1})) + ", amplitude-oracle diff = " + num(oracle_diff));
    }

    // 5. narrow packet on resonance spreads evenly over the four channels
    {
        fcs::ExperimentConfig cfg = resonant;
        cfg.modes.resize(1);
        cfg.modes[0].momentum_width =
            fcs::momentum_width_for_energy_width(0.05 / 10.0, cfg.modes[0].center_momentum);
        const auto ov =
            fcs::overlap_set(cfg.channels, cfg.modes, cfg.scatterer, cfg.quadrature, 0.0);
        double worst = 0.0;
        std::string weights;
        for (const auto& q : ov.outgoing) {
            const double w = q(0, 0).real();
            worst = std::max(worst, std::abs(w - 0.25));
            weights += (weights.empty() ? "" : ", ") + num(w);
        }
        line(worst <= 0.02, "resonant single-particle weights",
             "w(m) = [" + weights + "], max |w - 1/4| = " + num(worst) + " (tol 0.02)");
    }

    // Full sweep shared by the ordering and separation criteria.
    fcs::SweepOptions opt;
    opt.threads = 4;
    const fcs::SweepResult sweep = fcs::run_sweep(resonant, resonant.sweep->taus(), opt);
    const std::size_t c_dev = column(sweep, "input_max_dev");
    const double gamma = std::get<fcs::BreitWigner>(resonant.scatterer).width;

    auto window_margins = [&](const std::string& prefix, double& min_margin,
                              double& min_overlapping_margin) {
        const std::size_t b = column(sweep, "b" + prefix);
        const std::size_t d = column(sweep, "d" + prefix);
        const std::size_t f = column(sweep, "f" + prefix);
        min_margin = 1e300;
        min_overlapping_margin = 1e300;
        for (std::size_t r = 0; r < sweep.rows.size(); ++r) {
            const auto& row = sweep.rows[r];
            if (row[c_dev] > 0.01) continue; // correlated: bounds not asserted
            const double mb = row[b] - row[d];
            const double mf = row[d] - row[f];
            min_margin = std::min({min_margin, mb, mf});
            if (gamma * sweep.taus[r] <= 10.0)
                min_overlapping_margin = std::min({min_overlapping_margin, mb, mf});
        }
    };

    // 6. bunching ordering for all particles in the target channel
    {
        double min_margin = 0.0, min_dwell = 0.0;
        window_margins("_all_3", min_margin, min_dwell);
        line(min_margin >= 0.0 && min_dwell > 1e-6, "bunching ordering",
             "min margin " + num(min_margin) + " over the decorrelated window, min margin " +
                 num(min_dwell) + " at dwell-overlapping points (must exceed 1e-6)");
    }

    // 7. no-particle orderings, single channel and channel pair
    {
        double m3 = 0.0, m3_dwell = 0.0, m34 = 0.0, m34_dwell = 0.0;
        window_margins("_none_3", m3, m3_dwell);
        window_margins("_zeros_3_4", m34, m34_dwell);
        line(m3 >= 0.0 && m34 >= 0.0, "no-particle ordering",
             "min margins " + num(m3) + " (channel 3) and " + num(m34) +
                 " (channels 3+4) over the decorrelated window");
    }

    // 8. distant packets lose all statistics: every kind converges to dp
    {
        const auto& ov = sampled.back(); // tau = 800 = 40 lifetimes
        const auto dp = fcs::full_distribution(ov, StatisticsKind::Distinguishable);
        double worst = 0.0;
        for (StatisticsKind kind : {StatisticsKind::Boson, StatisticsKind::Fermion}) {
            const auto dist = fcs::full_distribution(ov, kind);
            for (const auto& [n, w] : dp.prob)
                worst = std::max(worst, std::abs(dist.probability(n) - w));
        }
        line(worst <= 1e-3, "classical separation limit",
             "max |W - W_dp| = " + num(worst) + " at 40 lifetimes (tol 1e-3)");
    }

    // 9. independent routes agree: dft extraction, mean formulas, marginal
    //    formulas, and the two permanent algorithms
    {
        const auto& ov = sampled[2]; // tau = 130
        double dft_diff = 0.0;
        for (StatisticsKind kind : kAllKinds) {
            const auto direct = fcs::full_distribution(ov, kind);
            const auto dft = fcs::distribution_via_dft(ov, kind);
            for (const auto& [n, w] : direct.prob)
                dft_diff = std::max(dft_diff, std::abs(dft.probability(n) - w));
        }

        double mean_diff = 0.0;
        bool marginals_ok = true;
        for (StatisticsKind kind : kAllKinds) {
            const auto dist = fcs::full_distribution(ov, kind);
            const auto direct = fcs::mean_numbers(dist);
            const auto via_overlaps = fcs::mean_numbers_direct(ov, kind);
            for (std::size_t m = 0; m < 4; ++m)
                mean_diff = std::max(mean_diff, std::abs(direct[m] - via_overlaps[m]));
            try {
                for (int m = 0; m < 4; ++m) fcs::single_channel_marginal(ov, dist, m);
            } catch (const fcs::consistency_error&) {
                marginals_ok = false;
            }
        }

        double perm_diff = 0.0;
        for (unsigned n = 2; n <= 6; ++n) {
            const auto m = oracle::random_matrix(n, 300 + n);
            const auto a = fcs::permanent(m);
            const auto b = oracle::perm_sum(m);
            perm_diff = std::max(perm_diff, std::abs(a - b) / std::max(1.0, std::abs(b)));
        }

        line(dft_diff <= 1e-9 && mean_diff <= 1e-10 && marginals_ok && perm_diff <= 1e-12,
             "route equivalences",
             "dft vs enumeration " + num(dft_diff) + " (tol 1e-9), mean routes " +
                 num(mean_diff) + " (tol 1e-10), marginal routes " +
                 (marginals_ok ? std::string("within 1e-10") : std::string("DISAGREE")) +
                 ", permanent algorithms " + num(perm_diff) + " relative (tol 1e-12)");
    }

    // 10. structural identities of the overlap matrices
    {
        const auto& ov = sampled.front(); // tau = 10: correlated block structure
        bool psd = fcs::is_psd(ov.input);
        for (const auto& q : ov.outgoing) psd = psd && fcs::is_psd(q);
        for (std::uint64_t mask = 1; mask + 1 < (1u << 4); ++mask) {
            fcs::ComplexMatrix r = ov.input;
            for (std::size_t m = 0; m < 4; ++m)
                if ((mask >> m) & 1) r -= ov.outgoing[m];
            psd = psd && fcs::is_psd(r);
        }
        const double per_det =
            (fcs::permanent(ov.input) + fcs::determinant(ov.input)).real();
        const bool ok = ov.report.unitarity_residual <= 1e-8 && psd &&
                        std::abs(per_det - 2.0) <= 1e-10;
        line(ok, "structural identities",
             "completeness residual " + num(ov.report.unitarity_residual) +
                 " (tol 1e-8), all matrices psd: " + (psd ? "yes" : "NO") +
                 ", per + det = " + num(per_det) + " (tol 1e-10 about 2)");
    }

    // 11. diagonal scatterer: statistics kind cannot matter
    {
        fcs::ExperimentConfig cfg;
        cfg.channels.assign(3, fcs::ChannelSpec{});
        for (int k = 0; k < 3; ++k) cfg.channels[k].index = k;
        cfg.scatterer = fcs::DiagonalPhases{{0.4, -0.9, 1.7}};
        fcs::WavePacketMode a, b, c;
        a.channel = 0;
        b.channel = 1;
        c.channel = 1;
        c.inject_time = 30.0;
        a.center_momentum = b.center_momentum = c.center_momentum = 2.0 * std::numbers::pi;
        a.momentum_width = b.momentum_width = c.momentum_width = a.center_momentum / 30.0;
        cfg.modes = {a, b, c};
        const auto ov =
            fcs::overlap_set(cfg.channels, cfg.modes, cfg.scatterer, cfg.quadrature, 0.0);

        const auto boson = fcs::full_distribution(ov, StatisticsKind::Boson);
        const auto fermion = fcs::full_distribution(ov, StatisticsKind::Fermion);
        const auto dp = fcs::full_distribution(ov, StatisticsKind::Distinguishable);
        double worst = 0.0;
        for (const auto& [n, w] : boson.prob) {
            worst = std::max(worst, std::abs(w - fermion.probability(n)));
            worst = std::max(worst, std::abs(w - dp.probability(n)));
        }
        line(worst <= 1e-10, "diagonal scatterer equivalence",
             "max cross-kind difference " + num(worst) + " (tol 1e-10)");
    }

    std::cout << (failures == 0 ? "all acceptance criteria passed"
                                : std::to_string(failures) + " acceptance criteria failed")
              << "\n";
    return failures;
}
