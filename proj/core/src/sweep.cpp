#include "stirap/sweep.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "parallel.hpp"
#include "stirap/table.hpp"

namespace stirap {

namespace {

constexpr double quiet_nan = std::numeric_limits<double>::quiet_NaN();

int scanned_stage(const Scenario& sc) {
    return sc.field('C').present || sc.field('D').present ? 2 : 1;
}

// Rescale the stage to (omega, gamma, tau) and fit the window to the pulses.
double width_efficiency(const Scenario& base, int stage, double omega_mhz,
                        double linewidth_khz, double tau_us) {
    Scenario sc = base;
    const std::string prefix = "stage" + std::to_string(stage) + ".";
    set_scenario_value(sc, prefix + "peak_rabi_mhz", format_double(omega_mhz));
    set_scenario_value(sc, prefix + "linewidth_khz", format_double(linewidth_khz));
    set_scenario_value(sc, prefix + "tau_us", format_double(tau_us));
    const auto [p, s] = stage_letters(sc, stage);
    const double mid = 0.5 * (sc.field(p).center_us + sc.field(s).center_us);
    const double half_delay = 0.5 * std::abs(sc.field(p).center_us -
                                             sc.field(s).center_us);
    const double margin = half_delay + 2.5 * tau_us;
    sc.t_start_us = mid - margin;
    sc.t_end_us = mid + margin;
    return evaluate_scenario(sc).observable;
}

} // namespace

std::vector<double> linspace(double min, double max, int count) {
    if (count < 1) throw ConfigError("a scan needs at least one grid point");
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = min;
        return out;
    }
    for (int i = 0; i < count; ++i) {
        out[i] = min + (max - min) * i / (count - 1);
    }
    return out;
}

SingleResult evaluate_scenario(const Scenario& sc) {
    const EvolveOptions opt;
    if (sc.topology == ScenarioTopology::zeeman) {
        const zeeman::ZeemanConfig cfg = compile_zeeman(sc);
        Eigen::MatrixXcd rho0 =
            Eigen::MatrixXcd::Zero(zeeman::dimension, zeeman::dimension);
        rho0(initial_sublevel(sc), initial_sublevel(sc)) = 1.0;
        const EvolveResult res = zeeman::evolve(cfg, rho0, opt);
        return {extract_observable({res.final_state(), res.labels},
                                   sc.sweep.observable),
                res.stats.accepted};
    }
    const SystemConfig cfg = compile_system(sc);
    const DensityMatrix rho0 = DensityMatrix::pure(
        cfg.level_labels(), cfg.index_of_level(initial_level(sc)));
    const EvolveResult res = evolve(cfg, rho0.rho, opt);
    return {extract_observable({res.final_state(), res.labels},
                               sc.sweep.observable),
            res.stats.accepted};
}

std::vector<SweepRow> run_sweep(const Scenario& base,
                                const std::vector<double>& values, int jobs) {
    if (base.sweep.parameter.empty()) {
        throw ConfigError("sweep.parameter is not set");
    }
    std::vector<SweepRow> rows(values.size());
    detail::parallel_for_indexed(rows.size(), jobs, [&](std::size_t i) {
        SweepRow row{values[i], quiet_nan, false, "", 0, 0.0};
        const auto start = std::chrono::steady_clock::now();
        try {
            Scenario sc = base;
            set_scenario_value(sc, base.sweep.parameter,
                               format_double(values[i]));
            const SingleResult res = evaluate_scenario(sc);
            row.observable = res.observable;
            row.steps = res.steps;
        } catch (const std::exception& err) {
            row.failed = true;
            row.error = err.what();
        }
        row.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        rows[i] = row;
    });
    return rows;
}

std::vector<TauOptResult> tau_opt_scan(const Scenario& base, int jobs) {
    if (base.sweep.omega_values.empty() || base.sweep.linewidth_values.empty()) {
        throw ConfigError(
            "tau_opt_scan needs sweep.omega_values and sweep.linewidth_values");
    }
    const int stage = scanned_stage(base);
    struct Pair {
        double omega, gamma;
    };
    std::vector<Pair> pairs;
    for (double gamma : base.sweep.linewidth_values) {
        for (double omega : base.sweep.omega_values) {
            pairs.push_back({omega, gamma});
        }
    }
    std::vector<TauOptResult> results(pairs.size());

    detail::parallel_for_indexed(pairs.size(), jobs, [&](std::size_t k) {
        const auto [omega, gamma] = pairs[k];
        const auto efficiency = [&](double tau) {
            return width_efficiency(base, stage, omega, gamma, tau);
        };

        // Geometric coarse grid over the practical width range.
        constexpr double tau_lo = 0.25, tau_hi = 8.0;
        constexpr int grid_n = 12;
        std::vector<double> taus(grid_n), effs(grid_n);
        int best = 0;
        for (int i = 0; i < grid_n; ++i) {
            taus[i] = tau_lo * std::pow(tau_hi / tau_lo,
                                        static_cast<double>(i) / (grid_n - 1));
            effs[i] = efficiency(taus[i]);
            if (effs[i] > effs[best]) best = i;
        }

        TauOptResult out{omega, gamma, taus[best], effs[best]};
        if (gamma > 0.0) {
            // Interior maximum: golden-section refinement on the bracket.
            double lo = taus[std::max(best - 1, 0)];
            double hi = taus[std::min(best + 1, grid_n - 1)];
            constexpr double gr = 0.6180339887498949;
            double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
            double f1 = efficiency(x1), f2 = efficiency(x2);
            while (hi - lo > 0.02) {
                if (f1 < f2) {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + gr * (hi - lo);
                    f2 = efficiency(x2);
                } else {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - gr * (hi - lo);
                    f1 = efficiency(x1);
                }
            }
            out.tau_opt_us = 0.5 * (lo + hi);
            out.efficiency = efficiency(out.tau_opt_us);
        } else {
            // Monotone growth: smallest width reaching the 0.995 mark.
            constexpr double target = 0.995;
            int first = -1;
            for (int i = 0; i < grid_n; ++i) {
                if (effs[i] >= target) {
                    first = i;
                    break;
                }
            }
            if (first >= 0) {
                double lo = first == 0 ? 0.05 : taus[first - 1];
                double hi = taus[first];
                while (hi - lo > 0.01) {
                    const double mid = 0.5 * (lo + hi);
                    (efficiency(mid) >= target ? hi : lo) = mid;
                }
                out.tau_opt_us = hi;
                out.efficiency = efficiency(hi);
            }
        }
        results[k] = out;
    });
    return results;
}

} // namespace stirap
