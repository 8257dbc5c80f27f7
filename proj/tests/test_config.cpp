#include <catch2/catch_amalgamated.hpp>

#include "fcs/config.hpp"
#include "fcs/presets.hpp"
#include "fcs/sweep.hpp"

namespace {

const char* kMinimalConfig = R"({
  "channels": [{"threshold": 0.0}, {"threshold": 0.0}],
  "scatterer": {"type": "diagonal_phases", "phases": [0.0, 0.5]},
  "modes": [{"channel": 1, "center_momentum": 6.0, "momentum_width": 0.5}]
})";

} // namespace

TEST_CASE("minimal config parses with defaults") {
    const fcs::ExperimentConfig cfg = fcs::parse_config(kMinimalConfig);
    REQUIRE(cfg.channels.size() == 2);
    CHECK(cfg.channels[0].mass == 1.0);
    REQUIRE(cfg.modes.size() == 1);
    CHECK(cfg.modes[0].channel == 0); // file numbering is 1-based
    CHECK(cfg.modes[0].inject_time == 0.0);
    CHECK(cfg.tau == 0.0);
    CHECK_FALSE(cfg.sweep.has_value());
    CHECK(cfg.quadrature.base_nodes == 64);
}

TEST_CASE("config round-trips bit for bit") {
    for (const fcs::ExperimentConfig& cfg :
         {fcs::resonant_preset(), fcs::beam_splitter_preset()}) {
        const std::string text = fcs::config_to_json(cfg);
        const fcs::ExperimentConfig back = fcs::parse_config(text);

        REQUIRE(back.channels.size() == cfg.channels.size());
        for (std::size_t k = 0; k < cfg.channels.size(); ++k) {
            CHECK(back.channels[k].threshold == cfg.channels[k].threshold);
            CHECK(back.channels[k].mass == cfg.channels[k].mass);
        }
        REQUIRE(back.modes.size() == cfg.modes.size());
        for (std::size_t i = 0; i < cfg.modes.size(); ++i) {
            CHECK(back.modes[i].channel == cfg.modes[i].channel);
            CHECK(back.modes[i].center_momentum == cfg.modes[i].center_momentum);
            CHECK(back.modes[i].momentum_width == cfg.modes[i].momentum_width);
            CHECK(back.modes[i].inject_position == cfg.modes[i].inject_position);
            CHECK(back.modes[i].inject_time == cfg.modes[i].inject_time);
            CHECK(back.modes[i].delay_factor == cfg.modes[i].delay_factor);
        }
        CHECK(back.tau == cfg.tau);
        CHECK(back.sweep.has_value() == cfg.sweep.has_value());
        if (cfg.sweep) {
            CHECK(back.sweep->tau_min == cfg.sweep->tau_min);
            CHECK(back.sweep->tau_max == cfg.sweep->tau_max);
            CHECK(back.sweep->tau_points == cfg.sweep->tau_points);
        }
        CHECK(back.quadrature.window_half_widths == cfg.quadrature.window_half_widths);
        CHECK(back.quadrature.convergence_tol == cfg.quadrature.convergence_tol);

        // and the serialized form is a fixed point
        CHECK(fcs::config_to_json(back) == text);
    }
}

TEST_CASE("scatterer variants round-trip") {
    fcs::ExperimentConfig cfg = fcs::beam_splitter_preset();
    const std::string text = fcs::config_to_json(cfg);
    const fcs::ExperimentConfig back = fcs::parse_config(text);
    const auto& u0 = std::get<fcs::ConstantUnitary>(cfg.scatterer).u;
    const auto& u1 = std::get<fcs::ConstantUnitary>(back.scatterer).u;
    CHECK(fcs::max_abs_diff(u0, u1) == 0.0);

    cfg.scatterer = fcs::DiagonalPhases{{0.25, -1.5}};
    const auto back2 = fcs::parse_config(fcs::config_to_json(cfg));
    CHECK(std::get<fcs::DiagonalPhases>(back2.scatterer).phases ==
          std::vector<double>{0.25, -1.5});
}

TEST_CASE("config rejection") {
    auto expect_reject = [](const std::string& text) {
        CHECK_THROWS_AS(fcs::parse_config(text), fcs::config_error);
    };

    expect_reject("not json at all");
    expect_reject("[]");
    expect_reject(R"({"channels": []})");
    // missing scatterer
    expect_reject(R"({"channels": [{}], "modes": [
        {"channel": 1, "center_momentum": 6.0, "momentum_width": 0.5}]})");
    // channel index out of range
    expect_reject(R"({"channels": [{}],
        "scatterer": {"type": "diagonal_phases", "phases": [0.0]},
        "modes": [{"channel": 2, "center_momentum": 6.0, "momentum_width": 0.5}]})");
    // packet too wide
    expect_reject(R"({"channels": [{}],
        "scatterer": {"type": "diagonal_phases", "phases": [0.0]},
        "modes": [{"channel": 1, "center_momentum": 6.0, "momentum_width": 2.0}]})");
    // non-unitary constant matrix
    expect_reject(R"({"channels": [{}],
        "scatterer": {"type": "constant_unitary", "matrix": [[[0.5, 0.0]]]},
        "modes": [{"channel": 1, "center_momentum": 6.0, "momentum_width": 0.5}]})");
    // zero resonance width
    expect_reject(R"({"channels": [{}],
        "scatterer": {"type": "breit_wigner", "resonance_energy": 18.0, "width": 0.0},
        "modes": [{"channel": 1, "center_momentum": 6.0, "momentum_width": 0.5}]})");
    // unknown scatterer type
    expect_reject(R"({"channels": [{}],
        "scatterer": {"type": "perfectly_absorbing"},
        "modes": [{"channel": 1, "center_momentum": 6.0, "momentum_width": 0.5}]})");
    // bad sweep grid
    expect_reject(R"({"channels": [{}],
        "scatterer": {"type": "diagonal_phases", "phases": [0.0]},
        "modes": [{"channel": 1, "center_momentum": 6.0, "momentum_width": 0.5}],
        "sweep": {"tau_max": -5.0}})");
}

TEST_CASE("sweep grids and kind lists") {
    fcs::SweepGrid grid{0.0, 10.0, 5};
    const auto taus = grid.taus();
    REQUIRE(taus.size() == 5);
    CHECK(taus.front() == 0.0);
    CHECK(taus.back() == 10.0);
    CHECK(taus[2] == Catch::Approx(5.0));

    CHECK(fcs::parse_kinds("boson,fermion,dp").size() == 3);
    CHECK(fcs::parse_kinds("dp").front() == fcs::StatisticsKind::Distinguishable);
    CHECK_THROWS_AS(fcs::parse_kinds("anyon"), fcs::config_error);
    CHECK_THROWS_AS(fcs::parse_kinds(""), fcs::config_error);
}

TEST_CASE("presets validate") {
    CHECK_NOTHROW(fcs::validate_config(fcs::resonant_preset()));
    CHECK_NOTHROW(fcs::validate_config(fcs::beam_splitter_preset()));

    const auto cfg = fcs::resonant_preset();
    REQUIRE(cfg.sweep.has_value());
    CHECK(cfg.sweep->tau_points == 161);
    CHECK(cfg.sweep->tau_max == Catch::Approx(800.0));
    CHECK(fcs::energy_width(cfg.modes[0]) == Catch::Approx(0.05).margin(1e-15));
    CHECK(fcs::total_energy(cfg.modes[0].center_momentum, cfg.channels[0]) ==
          Catch::Approx(18.0).margin(1e-12));
}
