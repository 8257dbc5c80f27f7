// fcs_cli: full counting statistics for identical wave packets scattered
// into multiple channels. Subcommands:
//
//   single   one delay value, full outcome distribution per statistics kind
//   sweep    tau grid from the config's sweep block, one CSV row per tau
//   audit    bunching/anti-bunching bound table at one delay value
//   preset   canned resonant four-channel run (fig3 or fig4 file prefix)
//
// Exit codes: 0 success, 1 configuration error, 2 quadrature did not
// converge, 3 internal consistency check failed, 4 a statistics bound was
// violated where it should hold.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fcs/fcs.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::string kinds = "boson,fermion,dp";
    int threads = 1;
    double quad_scale = 1.0;
};

std::filesystem::path output_path(const CommonArgs& args, const std::string& name) {
    std::filesystem::create_directories(args.out_dir);
    return std::filesystem::path(args.out_dir) / name;
}

void apply_quad_scale(fcs::ExperimentConfig& cfg, double scale) {
    if (!(scale > 0.0)) throw fcs::config_error("--quad-scale must be positive");
    cfg.quadrature.scale *= scale;
}

std::vector<std::string> config_comments(const fcs::ExperimentConfig& cfg, double tau) {
    std::vector<std::string> c;
    c.push_back("channels = " + std::to_string(cfg.channels.size()) +
                ", particles = " + std::to_string(cfg.modes.size()));
    c.push_back("units: energies in lowest box level, times in inverse energy");
    c.push_back("tau = " + fcs::format_double(tau));
    return c;
}

int run_single(const CommonArgs& args, double tau_override, bool has_tau, bool dump_overlaps) {
    fcs::ExperimentConfig cfg = fcs::load_config_file(args.config_path);
    apply_quad_scale(cfg, args.quad_scale);
    const double tau = has_tau ? tau_override : cfg.tau;
    const auto kinds = fcs::parse_kinds(args.kinds);

    const fcs::OverlapSet ov =
        fcs::overlap_set(cfg.channels, cfg.modes, cfg.scatterer, cfg.quadrature, tau);
    if (dump_overlaps) {
        const auto path = output_path(args, "overlaps.csv");
        fcs::write_overlaps_csv(path.string(), ov);
        std::cout << "wrote " << path.string() << "\n";
    }

    for (fcs::StatisticsKind kind : kinds) {
        const std::string name = std::string("distribution_") + fcs::to_string(kind) + ".csv";
        try {
            const fcs::CountingDistribution dist = fcs::full_distribution(ov, kind);
            const std::vector<double> means = fcs::checked_mean_numbers(ov, dist);
            for (std::size_t m = 0; m < cfg.channels.size(); ++m)
                fcs::single_channel_marginal(ov, dist, int(m));

            auto comments = config_comments(cfg, tau);
            std::string mean_line = "mean counts:";
            for (double v : means) mean_line += " " + fcs::format_double(v);
            comments.push_back(mean_line);
            const auto path = output_path(args, name);
            fcs::write_distribution_csv(path.string(), comments, dist);
            std::cout << "wrote " << path.string() << " (norm residual "
                      << fcs::format_double(dist.norm_residual) << ")\n";
        } catch (const fcs::degenerate_input_error& e) {
            std::cout << "skipped " << name << ": " << e.what() << "\n";
        }
    }
    return 0;
}

int run_sweep_cmd(const CommonArgs& args) {
    fcs::ExperimentConfig cfg = fcs::load_config_file(args.config_path);
    apply_quad_scale(cfg, args.quad_scale);
    if (!cfg.sweep) throw fcs::config_error("config has no \"sweep\" block");

    fcs::SweepOptions opt;
    opt.kinds = fcs::parse_kinds(args.kinds);
    opt.threads = args.threads;
    const fcs::SweepResult result = fcs::run_sweep(cfg, cfg.sweep->taus(), opt);

    auto comments = config_comments(cfg, cfg.sweep->tau_min);
    comments.back() = "tau grid: " + std::to_string(cfg.sweep->tau_points) + " points in [" +
                      fcs::format_double(cfg.sweep->tau_min) + ", " +
                      fcs::format_double(cfg.sweep->tau_max) + "]";
    const auto path = output_path(args, "sweep.csv");
    fcs::write_csv(path.string(), comments, result.columns, result.rows);
    std::cout << "wrote " << path.string() << " (" << result.rows.size() << " rows)\n";
    return 0;
}

int run_audit(const CommonArgs& args, double tau_override, bool has_tau, bool write_file) {
    fcs::ExperimentConfig cfg = fcs::load_config_file(args.config_path);
    apply_quad_scale(cfg, args.quad_scale);
    const double tau = has_tau ? tau_override : cfg.tau;

    const fcs::OverlapSet ov =
        fcs::overlap_set(cfg.channels, cfg.modes, cfg.scatterer, cfg.quadrature, tau);
    const fcs::InequalityReport report = fcs::inequality_audit(ov);
    std::cout << audit_table(report);
    if (write_file) {
        const auto path = output_path(args, "audit.csv");
        fcs::write_audit_csv(path.string(), config_comments(cfg, tau), report);
        std::cout << "wrote " << path.string() << "\n";
    }
    return 0;
}

int run_preset(const CommonArgs& args, const std::string& name) {
    if (name != "fig3" && name != "fig4")
        throw fcs::config_error("unknown preset \"" + name + "\" (use fig3 or fig4)");
    fcs::ExperimentConfig cfg = fcs::resonant_preset();
    apply_quad_scale(cfg, args.quad_scale);

    const auto config_path = output_path(args, name + "_config.json");
    fcs::save_config_file(cfg, config_path.string());
    std::cout << "wrote " << config_path.string() << "\n";

    fcs::SweepOptions opt;
    opt.kinds = fcs::parse_kinds(args.kinds);
    opt.threads = args.threads;
    const fcs::SweepResult result = fcs::run_sweep(cfg, cfg.sweep->taus(), opt);

    auto comments = config_comments(cfg, 0.0);
    comments.back() = "tau grid: " + std::to_string(cfg.sweep->tau_points) + " points in [" +
                      fcs::format_double(cfg.sweep->tau_min) + ", " +
                      fcs::format_double(cfg.sweep->tau_max) + "]";
    if (name == "fig3")
        comments.push_back("key columns: *_all_3 (all particles in channel 3), *_none_3");
    else
        comments.push_back("key columns: *_zeros_3_4 (channels 3 and 4 both empty), *_one_3");
    const auto path = output_path(args, name + "_sweep.csv");
    fcs::write_csv(path.string(), comments, result.columns, result.rows);
    std::cout << "wrote " << path.string() << " (" << result.rows.size() << " rows)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"full counting statistics of identical wave packets on a multichannel scatterer"};
    app.require_subcommand(1);

    CommonArgs args;
    double tau = 0.0;
    bool dump_overlaps = false;
    bool audit_csv = false;
    std::string preset_name;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* c = cmd->add_option("--config", args.config_path, "experiment config (JSON)");
        if (needs_config) c->required();
        cmd->add_option("--out", args.out_dir, "output directory (default: current)");
        cmd->add_option("--kinds", args.kinds, "comma list of boson, fermion, dp");
        cmd->add_option("--threads", args.threads, "worker threads for sweeps")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--quad-scale", args.quad_scale, "multiply the quadrature node budget");
    };

    CLI::App* single = app.add_subcommand("single", "full distribution at one delay");
    add_common(single, true);
    auto* single_tau = single->add_option("--tau", tau, "delay (overrides the config)");
    single->add_flag("--dump-overlaps", dump_overlaps, "also write the overlap matrices");

    CLI::App* sweep = app.add_subcommand("sweep", "distribution summaries over the tau grid");
    add_common(sweep, true);

    CLI::App* audit = app.add_subcommand("audit", "bunching bound table at one delay");
    add_common(audit, true);
    auto* audit_tau = audit->add_option("--tau", tau, "delay (overrides the config)");
    audit->add_flag("--csv", audit_csv, "also write audit.csv to the output directory");

    CLI::App* preset = app.add_subcommand("preset", "canned resonant four-channel sweep");
    preset->add_option("name", preset_name, "fig3 or fig4")->required();
    add_common(preset, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (single->parsed()) return run_single(args, tau, !single_tau->empty(), dump_overlaps);
        if (sweep->parsed()) return run_sweep_cmd(args);
        if (audit->parsed()) return run_audit(args, tau, !audit_tau->empty(), audit_csv);
        return run_preset(args, preset_name);
    } catch (const fcs::inequality_violation_error& e) {
        std::cerr << "bound violation: " << e.what() << "\n";
        return 4;
    } catch (const fcs::convergence_error& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "consistency error: " << e.what() << "\n";
        return 3;
    }
}
