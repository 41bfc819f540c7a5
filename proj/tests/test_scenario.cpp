#include <Eigen/Dense>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "stirap/errors.hpp"
#include "stirap/presets.hpp"
#include "stirap/scenario.hpp"
#include "stirap/units.hpp"

using namespace stirap;

namespace {

const char* kMinimalStage1 = R"(
[ion]
species = Ca40

[run]
kind = single
topology = stage1
initial = 1
t_start_us = -5
t_end_us = 5
decay = false
samples = 3

[stage1.fields.A]
peak_rabi_mhz = 100
detuning_mhz = 600
center_us = 0.6
width_us = 2
linewidth_khz = 2
off_fraction = 0.01

[stage1.fields.B]
peak_rabi_mhz = 50
detuning_mhz = 599
center_us = -0.6
width_us = 2

[motion]
velocity_m_s = 0.5
rf_mhz = 16.8
phase_rad = 0.25
)";

std::string error_of(const std::string& text) {
    try {
        parse_scenario_string(text, "test");
        return "";
    } catch (const ConfigError& e) {
        return e.what();
    }
}

} // namespace

TEST_SUITE("scenario") {

TEST_CASE("preset catalog: expected names, all round-trip") {
    const auto& catalog = preset_catalog();
    std::set<std::string> names;
    for (const auto& p : catalog) names.insert(p.name);
    const std::set<std::string> expected = {
        "fig3_amax",       "fig4_eta_opt",     "fig5_delay",
        "fig6_two_photon", "fig7_eigentrack",  "fig8_linewidth",
        "fig9_pulsewidth", "fig10_tau_opt",    "fig11_residual",
        "fig12_micromotion", "fig14_polarization", "fig15_full"};
    CHECK(names == expected);
    CHECK(catalog.size() == expected.size());

    for (const auto& p : catalog) {
        CAPTURE(p.name);
        CHECK_FALSE(p.summary.empty());
        const std::string once = serialize_scenario(p.scenario);
        const Scenario back = parse_scenario_string(once, p.name);
        CHECK(serialize_scenario(back) == once);
    }
}

TEST_CASE("parser rejects malformed input with origin and line") {
    std::string msg = error_of("[nope]\n");
    CHECK(msg.find("test:1:") != std::string::npos);
    CHECK(msg.find("unknown section") != std::string::npos);

    msg = error_of("[run]\nbogus = 3\n");
    CHECK(msg.find("test:2:") != std::string::npos);
    CHECK(msg.find("unknown setting: run.bogus") != std::string::npos);

    msg = error_of("[run\nkind = single\n");
    CHECK(msg.find("unterminated section header") != std::string::npos);

    msg = error_of("kind = single\n");
    CHECK(msg.find("key outside of any [section]") != std::string::npos);

    msg = error_of("[run]\nkind single\n");
    CHECK(msg.find("expected key = value") != std::string::npos);

    msg = error_of("[run]\nsamples = many\n");
    CHECK(msg.find("test:2:") != std::string::npos);
}

TEST_CASE("field letters are owned by their stage") {
    Scenario sc = find_preset("fig6_two_photon")->scenario;
    try {
        set_scenario_value(sc, "stage1.fields.C.peak_rabi_mhz", "10");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("field C belongs to stage2, not stage1") !=
              std::string::npos);
    }
    CHECK_THROWS_AS(set_scenario_value(sc, "stage2.fields.A.width_us", "1"),
                    ConfigError);
    // The section headers themselves only exist in the correct pairing.
    CHECK(error_of("[stage1.fields.C]\n").find("unknown section") !=
          std::string::npos);
}

TEST_CASE("virtual stage paths move pulse pairs consistently") {
    Scenario sc = find_preset("fig6_two_photon")->scenario;
    const auto num = [&](const std::string& path) {
        return std::stod(get_scenario_value(sc, path));
    };

    SUBCASE("eta preserves the pair midpoint") {
        const double mid0 = 0.5 * (num("stage2.fields.C.center_us") +
                                   num("stage2.fields.D.center_us"));
        set_scenario_value(sc, "stage2.eta", "0.9");
        CHECK(num("stage2.eta") == doctest::Approx(0.9).epsilon(1e-12));
        const double mid1 = 0.5 * (num("stage2.fields.C.center_us") +
                                   num("stage2.fields.D.center_us"));
        CHECK(mid1 == doctest::Approx(mid0).scale(1.0).epsilon(1e-12));
        // Counterintuitive order: pump (C) comes after Stokes (D).
        CHECK(num("stage2.fields.C.center_us") > num("stage2.fields.D.center_us"));
        const double dt = num("stage2.fields.C.center_us") -
                          num("stage2.fields.D.center_us");
        CHECK(dt == doctest::Approx(0.9 * 2.0 / std::numbers::sqrt2).epsilon(1e-12));
    }
    SUBCASE("tau_us preserves eta and midpoint") {
        const double eta0 = num("stage2.eta");
        set_scenario_value(sc, "stage2.tau_us", "3.5");
        CHECK(num("stage2.fields.C.width_us") == 3.5);
        CHECK(num("stage2.fields.D.width_us") == 3.5);
        CHECK(num("stage2.eta") == doctest::Approx(eta0).epsilon(1e-12));
        CHECK_THROWS_AS(set_scenario_value(sc, "stage2.tau_us", "0"), ConfigError);
    }
    SUBCASE("two_photon_mhz offsets the Stokes detuning") {
        set_scenario_value(sc, "stage2.two_photon_mhz", "0.25");
        CHECK(num("stage2.fields.D.detuning_mhz") ==
              doctest::Approx(num("stage2.fields.C.detuning_mhz") + 0.25));
        CHECK(num("stage2.two_photon_mhz") == doctest::Approx(0.25));
    }
    SUBCASE("stage-wide amplitude and linewidth") {
        set_scenario_value(sc, "stage2.peak_rabi_mhz", "140");
        CHECK(num("stage2.fields.C.peak_rabi_mhz") == 140.0);
        CHECK(num("stage2.fields.D.peak_rabi_mhz") == 140.0);
        set_scenario_value(sc, "stage2.linewidth_khz", "4");
        CHECK(num("stage2.fields.C.linewidth_khz") == 4.0);
        CHECK(num("stage2.fields.D.linewidth_khz") == 4.0);
    }
    SUBCASE("all.* touches every present field") {
        Scenario full = find_preset("fig15_full")->scenario;
        set_scenario_value(full, "all.linewidth_khz", "3");
        set_scenario_value(full, "all.off_fraction", "0.02");
        for (char letter : {'A', 'B', 'C', 'D'}) {
            CHECK(full.field(letter).linewidth_khz == 3.0);
            CHECK(full.field(letter).off_fraction == 0.02);
        }
    }
    SUBCASE("missing stage") {
        CHECK_THROWS_AS(set_scenario_value(sc, "stage1.eta", "0.9"), ConfigError);
    }
}

TEST_CASE("apply_override parses path=value") {
    Scenario sc = find_preset("fig6_two_photon")->scenario;
    apply_override(sc, "run.samples=7");
    CHECK(sc.samples == 7);
    CHECK(get_scenario_value(sc, "run.samples") == "7");
    apply_override(sc, "sweep.observable=P3");
    CHECK(sc.sweep.observable == "P3");
    CHECK_THROWS_AS(apply_override(sc, "run.samples"), ConfigError);
    CHECK_THROWS_AS(apply_override(sc, "no.such.path=1"), ConfigError);
    CHECK_THROWS_AS(get_scenario_value(sc, "no.such.path"), ConfigError);
}

TEST_CASE("compile_system converts experimentalist units") {
    const Scenario sc = parse_scenario_string(kMinimalStage1, "inline");
    const SystemConfig cfg = compile_system(sc);

    CHECK(cfg.topology == Topology::stage1_lambda);
    CHECK(cfg.species.name == "Ca40");
    REQUIRE(cfg.fields.size() == 2);

    const LaserField& a = cfg.fields[0];
    CHECK(a.label == 'A');
    CHECK(a.role == FieldRole::pump);
    CHECK(a.pulse.peak_rabi == doctest::Approx(units::mhz_to_rad(100.0)).epsilon(1e-12));
    CHECK(a.pulse.width == doctest::Approx(2e-6).epsilon(1e-12));
    CHECK(a.pulse.center == doctest::Approx(0.6e-6).epsilon(1e-12));
    CHECK(a.pulse.residual_floor ==
          doctest::Approx(0.01 * units::mhz_to_rad(100.0)).epsilon(1e-12));
    CHECK(a.detuning == doctest::Approx(units::mhz_to_rad(600.0)).epsilon(1e-12));
    CHECK(a.linewidth == doctest::Approx(units::khz_to_rad(2.0)).epsilon(1e-12));

    const LaserField& b = cfg.fields[1];
    CHECK(b.label == 'B');
    CHECK(b.role == FieldRole::stokes);
    CHECK(b.pulse.residual_floor == 0.0);

    CHECK(cfg.motion.peak_velocity == 0.5);
    CHECK(cfg.motion.rf_frequency == doctest::Approx(units::mhz_to_rad(16.8)).epsilon(1e-12));
    CHECK(cfg.motion.phase == 0.25);
    CHECK(cfg.t_start == doctest::Approx(-5e-6).epsilon(1e-12));
    CHECK(cfg.t_end == doctest::Approx(5e-6).epsilon(1e-12));
    CHECK_FALSE(cfg.decay_enabled);
    CHECK(initial_level(sc) == 1);
}

TEST_CASE("default micromotion phase peaks between the outer pulse centers") {
    Scenario sc = parse_scenario_string(kMinimalStage1, "inline");
    sc.motion.phase_rad.reset();
    set_scenario_value(sc, "stage1.fields.A.center_us", "1.0");
    const SystemConfig cfg = compile_system(sc);
    // Centers 1.0 and -0.6 us: extremum at t_mid = 0.2 us.
    const double t_mid = units::us_to_s(0.5 * (1.0 - 0.6));
    CHECK(cfg.motion.phase ==
          doctest::Approx(-cfg.motion.rf_frequency * t_mid).epsilon(1e-12));
    const double shift_mid =
        cfg.motion.detuning_shift(cfg.species.lambda_a, t_mid);
    CHECK(std::abs(shift_mid) ==
          doctest::Approx(cfg.motion.peak_velocity * units::two_pi /
                          cfg.species.lambda_a)
              .epsilon(1e-12));
}

TEST_CASE("stage_schedule reproduces the adiabaticity parameter") {
    const Scenario sc = find_preset("fig6_two_photon")->scenario;
    const PulseSchedule sched = stage_schedule(sc, 2);
    CHECK(sched.tau == doctest::Approx(2e-6).epsilon(1e-12));
    CHECK(sched.eta() == doctest::Approx(0.8485281374238571).epsilon(1e-12));
    CHECK(sched.ratio() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sched.adiabaticity_lambda() ==
          doctest::Approx(9.256006121163265).epsilon(1e-12));
    CHECK_THROWS_AS(stage_schedule(sc, 1), ConfigError);
}

TEST_CASE("run kinds and topologies round-trip their names") {
    for (const char* name :
         {"single", "sweep", "amax_scan", "eta_opt_scan", "eigentrack",
          "tau_opt_scan", "polarization_scan"}) {
        CHECK(to_string(parse_run_kind(name)) == name);
    }
    CHECK_THROWS_AS(parse_run_kind("wibble"), ConfigError);

    for (const char* name : {"stage1", "stage2", "five_level", "zeeman"}) {
        CHECK(to_string(parse_topology(name)) == name);
    }
    CHECK_THROWS_AS(parse_topology("stage3"), ConfigError);
}

TEST_CASE("initial state resolution per topology") {
    Scenario sc = parse_scenario_string(kMinimalStage1, "inline");
    sc.initial = "3";
    CHECK(initial_level(sc) == 3);
    sc.initial = "7";
    CHECK_THROWS_AS(initial_level(sc), ConfigError);
    sc.initial = "down";
    CHECK_THROWS_AS(initial_level(sc), ConfigError);

    CHECK(initial_sublevel(find_preset("fig14_polarization")->scenario) >= 0);
    Scenario zsc = find_preset("fig14_polarization")->scenario;
    zsc.initial = "up";
    CHECK(initial_sublevel(zsc) == 1);
    zsc.initial = "down";
    CHECK(initial_sublevel(zsc) == 0);
    zsc.initial = "2";
    CHECK_THROWS_AS(initial_sublevel(zsc), ConfigError);
}

TEST_CASE("observable extraction by basis label") {
    DensityMatrix dm{Eigen::MatrixXcd::Zero(3, 3), {"3", "4", "5"}};
    dm.rho(0, 0) = 0.2;
    dm.rho(1, 1) = 0.3;
    dm.rho(2, 2) = 0.5;
    CHECK(extract_observable(dm, "P3") == doctest::Approx(0.2));
    CHECK(extract_observable(dm, "P5") == doctest::Approx(0.5));
    CHECK_THROWS_AS(extract_observable(dm, "P1"), ConfigError);
    CHECK_THROWS_AS(extract_observable(dm, "Q5"), ConfigError);

    DensityMatrix zdm{Eigen::MatrixXcd::Zero(8, 8),
                      zeeman::ZeemanBasis::labels()};
    zdm.rho(0, 0) = 0.4;
    zdm.rho(1, 1) = 0.1;
    zdm.rho(3, 3) = 0.05;
    zdm.rho(7, 7) = 0.45;
    CHECK(extract_observable(zdm, "P_down") == doctest::Approx(0.4));
    CHECK(extract_observable(zdm, "P_up") == doctest::Approx(0.1));
    CHECK(extract_observable(zdm, "P_S") == doctest::Approx(0.5));
    CHECK(extract_observable(zdm, "P_P") == doctest::Approx(0.05));
    CHECK(extract_observable(zdm, "P_D") == doctest::Approx(0.45));
    CHECK_THROWS_AS(extract_observable(dm, "P_down"), ConfigError);
}

TEST_CASE("preset lookup: exact, prefix, figures/ and ambiguity") {
    REQUIRE(find_preset("fig6_two_photon") != nullptr);
    CHECK(find_preset("fig6") == find_preset("fig6_two_photon"));
    CHECK(find_preset("figures/fig6_two_photon") == find_preset("fig6_two_photon"));
    CHECK(find_preset("fig15") == find_preset("fig15_full"));
    CHECK(find_preset("fig1") == nullptr);   // ambiguous prefix
    CHECK(find_preset("nothing_here") == nullptr);
}

TEST_CASE("find_scenario: presets, files, and file-over-preset priority") {
    const Scenario preset = find_scenario("fig6");
    CHECK(serialize_scenario(preset) ==
          serialize_scenario(find_preset("fig6_two_photon")->scenario));

    const std::string path = "scenario_under_test.ini";
    {
        std::ofstream out(path);
        out << kMinimalStage1;
    }
    const Scenario from_file = find_scenario(path);
    CHECK(from_file.samples == 3);
    std::remove(path.c_str());

    // A file whose name collides with a preset shadows the preset.
    const std::string shadow = "fig6_two_photon";
    {
        std::ofstream out(shadow);
        out << kMinimalStage1;
    }
    const Scenario shadowed = find_scenario(shadow);
    CHECK(shadowed.topology == ScenarioTopology::stage1);
    CHECK(shadowed.samples == 3);
    std::remove(shadow.c_str());

    CHECK_THROWS_AS(find_scenario("definitely_not_a_scenario"), ConfigError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/path.ini"), ConfigError);
}

} // TEST_SUITE
