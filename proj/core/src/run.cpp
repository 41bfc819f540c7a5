#include "stirap/run.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "stirap/analytic.hpp"
#include "stirap/sweep.hpp"
#include "stirap/units.hpp"

namespace stirap {

namespace {

constexpr double quiet_nan = std::numeric_limits<double>::quiet_NaN();

void common_metadata(Table& table, const Scenario& sc) {
    if (!sc.name.empty()) table.set_metadata("scenario", sc.name);
    table.set_metadata("kind", to_string(sc.kind));
    table.set_metadata("topology", to_string(sc.topology));
    table.set_metadata("species", sc.species);
}

RunOutput run_single(const Scenario& sc) {
    RunOutput out;
    common_metadata(out.table, sc);

    EvolveOptions opt;
    opt.samples = sc.samples >= 2 ? sc.samples : 500;
    EvolveResult res;
    if (sc.topology == ScenarioTopology::zeeman) {
        const auto cfg = compile_zeeman(sc);
        Eigen::MatrixXcd rho0 =
            Eigen::MatrixXcd::Zero(zeeman::dimension, zeeman::dimension);
        rho0(initial_sublevel(sc), initial_sublevel(sc)) = 1.0;
        res = zeeman::evolve(cfg, rho0, opt);
    } else {
        const auto cfg = compile_system(sc);
        const auto rho0 = DensityMatrix::pure(
            cfg.level_labels(), cfg.index_of_level(initial_level(sc)));
        res = evolve(cfg, rho0.rho, opt);
    }

    std::vector<std::string> columns = {"t_us"};
    for (const auto& label : res.labels) columns.push_back("P" + label);
    out.table.set_columns(columns);
    for (std::size_t i = 0; i < res.times.size(); ++i) {
        std::vector<double> row = {units::s_to_us(res.times[i])};
        for (int k = 0; k < res.states[i].rows(); ++k) {
            row.push_back(res.states[i](k, k).real());
        }
        out.table.add_row(row);
    }
    for (const auto& series_label : res.labels) {
        PlotSeries s;
        s.label = "P" + series_label;
        out.plot.push_back(s);
    }
    for (std::size_t i = 0; i < res.times.size(); ++i) {
        for (std::size_t k = 0; k < res.labels.size(); ++k) {
            out.plot[k].x.push_back(units::s_to_us(res.times[i]));
            out.plot[k].y.push_back(
                res.states[i](static_cast<int>(k), static_cast<int>(k)).real());
        }
    }
    out.plot_options = {sc.name, "t (us)", "population", 860, 540};

    std::ostringstream sum;
    sum << "final populations:";
    const auto& last = res.final_state();
    for (std::size_t k = 0; k < res.labels.size(); ++k) {
        sum << " P" << res.labels[k] << " = "
            << format_double(last(static_cast<int>(k), static_cast<int>(k)).real());
    }
    out.summary = sum.str();
    return out;
}

RunOutput run_parameter_sweep(const Scenario& sc, int jobs) {
    RunOutput out;
    common_metadata(out.table, sc);
    out.table.set_metadata("parameter", sc.sweep.parameter);
    out.table.set_metadata("observable", sc.sweep.observable);

    const bool velocity_scan = sc.sweep.parameter == "motion.velocity_m_s";
    const std::vector<double> values =
        linspace(sc.sweep.min, sc.sweep.max, sc.sweep.count);
    const std::vector<SweepRow> rows = run_sweep(sc, values, jobs);

    std::vector<std::string> columns = {sc.sweep.parameter};
    if (velocity_scan) columns.push_back("temperature_mk");
    columns.insert(columns.end(),
                   {sc.sweep.observable, "steps", "wall_s", "error"});
    out.table.set_columns(columns);

    int failed = 0;
    double best = quiet_nan, best_x = quiet_nan;
    for (const auto& row : rows) {
        std::vector<std::string> cells = {format_double(row.value)};
        if (velocity_scan) {
            const double t_mk = 1e3 * temperature_from_micromotion_velocity(
                                          ion_lookup(sc.species), row.value);
            cells.push_back(format_double(t_mk));
        }
        cells.push_back(format_double(row.observable));
        cells.push_back(std::to_string(row.steps));
        cells.push_back(format_double(row.wall_seconds));
        cells.push_back(row.error);
        out.table.add_row(cells);
        if (row.failed) {
            ++failed;
        } else if (std::isnan(best) || row.observable > best) {
            best = row.observable;
            best_x = row.value;
        }
    }

    PlotSeries s;
    s.label = sc.sweep.observable;
    for (const auto& row : rows) {
        s.x.push_back(row.value);
        s.y.push_back(row.observable);
    }
    out.plot.push_back(s);
    out.plot_options = {sc.name, sc.sweep.parameter, sc.sweep.observable, 860,
                        540};

    std::ostringstream sum;
    sum << rows.size() << " points: max " << sc.sweep.observable << " = "
        << format_double(best) << " at " << sc.sweep.parameter << " = "
        << format_double(best_x);
    if (failed > 0) sum << "; " << failed << " failed";
    out.summary = sum.str();
    return out;
}

RunOutput run_amax_scan(const Scenario& sc) {
    RunOutput out;
    common_metadata(out.table, sc);
    out.table.set_columns({"r", "eta", "theta_max", "a_max", "has_solution"});

    const std::vector<double> etas =
        linspace(sc.sweep.min, sc.sweep.max, sc.sweep.count);
    const std::vector<double>& rs =
        sc.sweep.r_values.empty() ? std::vector<double>{1.0} : sc.sweep.r_values;

    for (double r : rs) {
        PlotSeries s;
        s.label = "r = " + format_double(r);
        for (double eta : etas) {
            const auto theta = solve_theta_max(eta, r);
            const double a =
                theta ? adiabaticity_function(*theta, eta, r) : quiet_nan;
            out.table.add_row({format_double(r), format_double(eta),
                               format_double(theta ? *theta : quiet_nan),
                               format_double(a), theta ? "true" : "false"});
            s.x.push_back(eta);
            s.y.push_back(a);
        }
        out.plot.push_back(std::move(s));
    }
    out.plot_options = {sc.name, "eta", "A_max", 860, 540};
    out.summary = std::to_string(rs.size()) + " ratio curves over " +
                  std::to_string(etas.size()) + " eta points (closed form)";
    return out;
}

RunOutput run_eta_opt_scan(const Scenario& sc, int jobs) {
    RunOutput out;
    common_metadata(out.table, sc);
    out.table.set_columns({"lambda", "r", "eta_opt", "efficiency"});

    OptimalEtaOptions opt;
    opt.detuning = units::mhz_to_rad(sc.sweep.detuning_mhz);
    opt.tau = units::us_to_s(sc.sweep.tau_us);
    opt.eta_min = sc.sweep.eta_min;
    opt.eta_max = sc.sweep.eta_max;
    opt.eta_step = sc.sweep.eta_step;
    opt.theta_end = sc.sweep.theta_end;
    opt.jobs = jobs;

    const std::vector<double>& lambdas = sc.sweep.lambda_values;
    const std::vector<double>& rs = sc.sweep.r_values;
    if (lambdas.empty() || rs.empty()) {
        throw ConfigError(
            "eta_opt_scan needs sweep.lambda_values and sweep.r_values");
    }
    for (double lambda : lambdas) {
        PlotSeries s;
        s.label = "lambda = " + format_double(lambda);
        for (double r : rs) {
            const OptimalEtaResult res = optimal_eta(lambda, r, opt);
            out.table.add_row({lambda, r, res.eta_opt, res.efficiency});
            s.x.push_back(r);
            s.y.push_back(res.eta_opt);
        }
        out.plot.push_back(std::move(s));
    }
    out.plot_options = {sc.name, "r", "eta_opt", 860, 540};
    out.summary = std::to_string(lambdas.size() * rs.size()) +
                  " optimizations over the eta grid";
    return out;
}

RunOutput run_eigentrack(const Scenario& sc) {
    RunOutput out;
    common_metadata(out.table, sc);

    const SystemConfig cfg = compile_system(sc);
    const int samples = sc.samples >= 2 ? sc.samples : 801;
    const std::vector<double> times =
        linspace(cfg.t_start, cfg.t_end, samples);
    const EigenTrackResult track = general_eigentrack(
        [&](double t) { return coherent_generator(cfg, t); }, times);

    const std::size_t branches = track.branch_labels.size();
    std::vector<std::string> columns = {"t_us"};
    for (const auto& label : track.branch_labels) {
        columns.push_back(label + "_mhz");
    }
    out.table.set_columns(columns);
    out.plot.resize(branches);
    for (std::size_t b = 0; b < branches; ++b) {
        out.plot[b].label = track.branch_labels[b];
    }
    for (std::size_t i = 0; i < track.times.size(); ++i) {
        std::vector<double> row = {units::s_to_us(track.times[i])};
        for (std::size_t b = 0; b < branches; ++b) {
            const double mhz =
                units::rad_to_mhz(track.eigenvalues[i](static_cast<int>(b)));
            row.push_back(mhz);
            out.plot[b].x.push_back(units::s_to_us(track.times[i]));
            out.plot[b].y.push_back(mhz);
        }
        out.table.add_row(row);
    }
    out.plot_options = {sc.name, "t (us)", "eigenvalue / 2pi (MHz)", 860, 540};
    out.summary = std::to_string(branches) + " branches, " +
                  std::to_string(times.size()) +
                  " samples, min branch overlap = " +
                  format_double(track.min_overlap);
    return out;
}

RunOutput run_tau_opt(const Scenario& sc, int jobs) {
    RunOutput out;
    common_metadata(out.table, sc);
    out.table.set_columns(
        {"omega_mhz", "linewidth_khz", "tau_opt_us", "efficiency"});

    const std::vector<TauOptResult> results = tau_opt_scan(sc, jobs);
    for (const auto& r : results) {
        out.table.add_row({r.omega_mhz, r.linewidth_khz, r.tau_opt_us,
                           r.efficiency});
    }
    for (double gamma : sc.sweep.linewidth_values) {
        PlotSeries s;
        s.label = "linewidth " + format_double(gamma) + " kHz";
        for (const auto& r : results) {
            if (r.linewidth_khz == gamma) {
                s.x.push_back(r.omega_mhz);
                s.y.push_back(r.tau_opt_us);
            }
        }
        out.plot.push_back(std::move(s));
    }
    out.plot_options = {sc.name, "peak Rabi frequency (MHz)", "tau_opt (us)",
                        860, 540};
    out.summary = std::to_string(results.size()) + " width optimizations";
    return out;
}

RunOutput run_polarization(const Scenario& sc, int jobs) {
    RunOutput out;
    common_metadata(out.table, sc);
    out.table.set_columns({"pi_ratio", "sigma_minus_ratio", "error_down",
                           "error_up", "error_total"});

    const zeeman::ZeemanConfig base = compile_zeeman(sc);
    const std::vector<double> sigmas =
        linspace(sc.sweep.min, sc.sweep.max, sc.sweep.count);
    const std::vector<double>& pis = sc.sweep.pi_values.empty()
                                         ? std::vector<double>{0.0}
                                         : sc.sweep.pi_values;
    const auto points =
        zeeman::projection_error_scan(base, sigmas, pis, {}, jobs);

    double worst = 0.0;
    for (const auto& p : points) {
        out.table.add_row({p.pi_ratio, p.sigma_minus_ratio, p.error_down,
                           p.error_up, p.error_total});
        worst = std::max(worst, p.error_total);
    }
    for (double pi_ratio : pis) {
        PlotSeries s;
        s.label = "pi ratio " + format_double(pi_ratio);
        for (const auto& p : points) {
            if (p.pi_ratio == pi_ratio) {
                s.x.push_back(p.sigma_minus_ratio);
                s.y.push_back(p.error_total);
            }
        }
        out.plot.push_back(std::move(s));
    }
    out.plot_options = {sc.name, "sigma- / sigma+ amplitude",
                        "detection error", 860, 540};
    out.summary = std::to_string(points.size()) +
                  " grid points, worst detection error = " +
                  format_double(worst);
    return out;
}

} // namespace

RunOutput run_scenario(const Scenario& sc, int jobs) {
    switch (sc.kind) {
        case RunKind::single: return run_single(sc);
        case RunKind::sweep: return run_parameter_sweep(sc, jobs);
        case RunKind::amax_scan: return run_amax_scan(sc);
        case RunKind::eta_opt_scan: return run_eta_opt_scan(sc, jobs);
        case RunKind::eigentrack: return run_eigentrack(sc);
        case RunKind::tau_opt_scan: return run_tau_opt(sc, jobs);
        case RunKind::polarization_scan: return run_polarization(sc, jobs);
    }
    throw ConfigError("unhandled run kind");
}

} // namespace stirap
