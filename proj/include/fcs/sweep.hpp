#pragma once

#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "fcs/config.hpp"
#include "fcs/counting.hpp"
#include "fcs/overlap.hpp"

namespace fcs {

struct SweepOptions {
    std::vector<StatisticsKind> kinds{StatisticsKind::Boson, StatisticsKind::Fermion,
                                      StatisticsKind::Distinguishable};
    int threads = 1;
};

// One row per tau. Column layout is fixed by the config shape and the
// requested kinds; see column_names(). Kind columns hold NaN when that
// statistics kind is singular at the given tau (coinciding fermions).
struct SweepResult {
    std::vector<std::string> columns;
    std::vector<double> taus;
    std::vector<std::vector<double>> rows;
};

namespace detail {

inline std::string kind_tag(StatisticsKind kind) {
    switch (kind) {
        case StatisticsKind::Boson: return "b";
        case StatisticsKind::Fermion: return "f";
        default: return "d";
    }
}

inline std::vector<std::pair<int, int>> channel_pairs(std::size_t N) {
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t a = 0; a < N; ++a)
        for (std::size_t b = a + 1; b < N; ++b) pairs.emplace_back(int(a), int(b));
    return pairs;
}

} // namespace detail

// Column names for a sweep over this config. Channel labels are 1-based to
// match the config file numbering. Per kind: norm residual, mean counts,
// probability of all J particles in one channel, of none in one channel, of
// exactly one in one channel, and of zero particles in each channel pair.
inline std::vector<std::string> sweep_column_names(std::size_t num_channels,
                                                   const SweepOptions& opt) {
    std::vector<std::string> cols{"tau",
                                  "quad_nodes",
                                  "doubling_residual",
                                  "completeness_residual",
                                  "per_input",
                                  "det_input",
                                  "input_max_dev",
                                  "uncorrelated",
                                  "bounds_asserted",
                                  "bounds_hold"};
    const auto pairs = detail::channel_pairs(num_channels);
    for (StatisticsKind kind : opt.kinds) {
        const std::string k = detail::kind_tag(kind);
        cols.push_back(k + "_norm_residual");
        for (std::size_t m = 1; m <= num_channels; ++m)
            cols.push_back(k + "_mean_" + std::to_string(m));
        for (std::size_t m = 1; m <= num_channels; ++m)
            cols.push_back(k + "_all_" + std::to_string(m));
        for (std::size_t m = 1; m <= num_channels; ++m)
            cols.push_back(k + "_none_" + std::to_string(m));
        for (std::size_t m = 1; m <= num_channels; ++m)
            cols.push_back(k + "_one_" + std::to_string(m));
        for (const auto& [a, b] : pairs)
            cols.push_back(k + "_zeros_" + std::to_string(a + 1) + "_" + std::to_string(b + 1));
    }
    return cols;
}

inline std::vector<double> sweep_row(const ExperimentConfig& cfg, double tau,
                                     const SweepOptions& opt) {
    const std::size_t N = cfg.channels.size();
    const int J = int(cfg.modes.size());
    const auto pairs = detail::channel_pairs(N);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    const OverlapSet ov = overlap_set(cfg.channels, cfg.modes, cfg.scatterer, cfg.quadrature, tau);
    const InequalityReport report = inequality_audit(ov);

    std::vector<double> row{tau,
                            double(ov.report.nodes),
                            ov.report.doubling_residual,
                            ov.report.unitarity_residual,
                            permanent(ov.input).real(),
                            determinant(ov.input).real(),
                            max_abs_diff_from_identity(ov.input),
                            report.uncorrelated ? 1.0 : 0.0,
                            report.asserted ? 1.0 : 0.0,
                            report.all_hold() ? 1.0 : 0.0};

    for (StatisticsKind kind : opt.kinds) {
        const std::size_t blank = row.size();
        try {
            const CountingDistribution dist = full_distribution(ov, kind);
            row.push_back(dist.norm_residual);
            for (double v : checked_mean_numbers(ov, dist)) row.push_back(v);
            for (std::size_t m = 0; m < N; ++m)
                row.push_back(joint_probability(ov, dist, {int(m)}, {J}));
            for (std::size_t m = 0; m < N; ++m)
                row.push_back(joint_probability(ov, dist, {int(m)}, {0}));
            for (std::size_t m = 0; m < N; ++m)
                row.push_back(joint_probability(ov, dist, {int(m)}, {1}));
            for (const auto& [a, b] : pairs)
                row.push_back(joint_probability(ov, dist, {a, b}, {0, 0}));
        } catch (const degenerate_input_error&) {
            row.resize(blank);
            row.insert(row.end(), 1 + 4 * N + pairs.size(), nan);
        }
    }
    return row;
}

// Runs the sweep, optionally across threads. Rows come back in tau order
// and are byte-identical for any thread count: each tau is computed
// independently and results land in preassigned slots.
inline SweepResult run_sweep(const ExperimentConfig& cfg, const std::vector<double>& taus,
                             const SweepOptions& opt) {
    SweepResult result;
    result.columns = sweep_column_names(cfg.channels.size(), opt);
    result.taus = taus;
    result.rows.resize(taus.size());

    const int threads = std::max(1, opt.threads);
    if (threads == 1 || taus.size() <= 1) {
        for (std::size_t i = 0; i < taus.size(); ++i) result.rows[i] = sweep_row(cfg, taus[i], opt);
        return result;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(taus.size());
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= taus.size()) return;
            try {
                result.rows[i] = sweep_row(cfg, taus[i], opt);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t workers = std::min(std::size_t(threads), taus.size());
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err); // earliest tau wins, deterministically
    return result;
}

inline std::vector<StatisticsKind> parse_kinds(const std::string& spec) {
    std::vector<StatisticsKind> kinds;
    std::size_t start = 0;
    while (start <= spec.size()) {
        std::size_t end = spec.find(',', start);
        if (end == std::string::npos) end = spec.size();
        const std::string token = spec.substr(start, end - start);
        if (token == "boson")
            kinds.push_back(StatisticsKind::Boson);
        else if (token == "fermion")
            kinds.push_back(StatisticsKind::Fermion);
        else if (token == "dp")
            kinds.push_back(StatisticsKind::Distinguishable);
        else if (!token.empty())
            throw config_error("unknown statistics kind \"" + token + "\" (use boson, fermion, dp)");
        start = end + 1;
    }
    if (kinds.empty()) throw config_error("--kinds selected no statistics kind");
    return kinds;
}

} // namespace fcs
