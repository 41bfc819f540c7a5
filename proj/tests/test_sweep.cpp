#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "stirap/errors.hpp"
#include "stirap/liouvillian.hpp"
#include "stirap/presets.hpp"
#include "stirap/scenario.hpp"
#include "stirap/sweep.hpp"

using namespace stirap;

TEST_SUITE("sweep") {

TEST_CASE("linspace endpoints and degenerate grids") {
    const std::vector<double> g = linspace(0.0, 1.0, 5);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 1.0);
    CHECK(g[2] == doctest::Approx(0.5).epsilon(1e-15));

    const std::vector<double> one = linspace(3.0, 9.0, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == 3.0);

    CHECK_THROWS_AS(linspace(0.0, 1.0, 0), ConfigError);
}

TEST_CASE("evaluate_scenario equals a direct integration") {
    const Scenario sc = find_preset("fig5_delay")->scenario;
    const SingleResult res = evaluate_scenario(sc);

    const SystemConfig cfg = compile_system(sc);
    const DensityMatrix rho0 = DensityMatrix::pure(
        cfg.level_labels(), cfg.index_of_level(initial_level(sc)));
    const EvolveResult direct = evolve(cfg, rho0.rho);
    const double expected = extract_observable(
        {direct.final_state(), direct.labels}, sc.sweep.observable);

    CHECK(res.observable == doctest::Approx(expected).epsilon(1e-14));
    CHECK(res.steps == direct.stats.accepted);
    CHECK(res.observable > 0.9);  // resonant shelving at full drive works
}

TEST_CASE("run_sweep is deterministic across worker counts") {
    Scenario base = find_preset("fig5_delay")->scenario;
    base.sweep.parameter = "stage2.eta";
    const std::vector<double> values = {0.4, 0.85, 1.3};

    const auto serial = run_sweep(base, values, 1);
    const auto parallel = run_sweep(base, values, 4);
    REQUIRE(serial.size() == values.size());
    REQUIRE(parallel.size() == values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        CHECK(serial[i].value == values[i]);
        CHECK_FALSE(serial[i].failed);
        CHECK(serial[i].observable == parallel[i].observable);
        CHECK(serial[i].steps == parallel[i].steps);
        CHECK(serial[i].wall_seconds >= 0.0);
    }
}

TEST_CASE("a failing row is recorded, not fatal") {
    Scenario base = find_preset("fig5_delay")->scenario;
    base.sweep.parameter = "stage2.fields.C.width_us";
    const auto rows = run_sweep(base, {2.0, 0.0, 1.0}, 1);
    REQUIRE(rows.size() == 3);

    CHECK_FALSE(rows[0].failed);
    CHECK(rows[0].observable > 0.0);

    CHECK(rows[1].failed);
    CHECK(std::isnan(rows[1].observable));
    CHECK(rows[1].error.find("positive pulse width") != std::string::npos);

    CHECK_FALSE(rows[2].failed);
    CHECK(rows[2].observable > 0.0);
}

TEST_CASE("run_sweep requires a parameter path") {
    Scenario base = find_preset("fig5_delay")->scenario;
    base.sweep.parameter.clear();
    CHECK_THROWS_AS(run_sweep(base, {1.0}, 1), ConfigError);
}

TEST_CASE("tau_opt_scan: coherent lasers hit the efficiency mark") {
    Scenario base = find_preset("fig10_tau_opt")->scenario;
    base.sweep.omega_values = {100.0};
    base.sweep.linewidth_values = {0.0};

    const auto results = tau_opt_scan(base, 1);
    REQUIRE(results.size() == 1);
    CHECK(results[0].omega_mhz == 100.0);
    CHECK(results[0].linewidth_khz == 0.0);
    CHECK(results[0].tau_opt_us > 0.0);
    CHECK(results[0].tau_opt_us <= 8.0);
    CHECK(results[0].efficiency >= 0.995);

    Scenario missing = base;
    missing.sweep.omega_values.clear();
    CHECK_THROWS_AS(tau_opt_scan(missing, 1), ConfigError);
}

} // TEST_SUITE
