// Command line front end: run scenarios and parameter scans, check the
// closed-form adiabaticity criterion, browse the built-in presets and the
// ion database.

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "stirap/analytic.hpp"
#include "stirap/presets.hpp"
#include "stirap/run.hpp"
#include "stirap/units.hpp"

namespace fs = std::filesystem;
using namespace stirap;

namespace {

Scenario load_with_overrides(const std::string& name_or_path,
                             const std::vector<std::string>& sets) {
    Scenario sc = find_scenario(name_or_path);
    for (const auto& assignment : sets) apply_override(sc, assignment);
    return sc;
}

int cmd_run(const std::string& name_or_path,
            const std::vector<std::string>& sets, const std::string& out_dir,
            bool plot, int jobs) {
    const Scenario sc = load_with_overrides(name_or_path, sets);
    const RunOutput out = run_scenario(sc, jobs);

    const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
    fs::create_directories(dir);
    const std::string stem = sc.name.empty() ? "result" : sc.name;
    const fs::path table_path =
        dir / (sc.output.table.empty() ? stem + ".tsv" : sc.output.table);
    out.table.write_file(table_path.string());

    std::cout << out.summary << '\n';
    std::cout << "table: " << table_path.string() << '\n';
    if (plot) {
        if (out.plot.empty()) {
            std::cout << "no plot for kind " << to_string(sc.kind) << '\n';
        } else {
            const fs::path plot_path =
                dir / (sc.output.plot.empty() ? stem + ".svg" : sc.output.plot);
            write_svg_plot(plot_path.string(), out.plot, out.plot_options);
            std::cout << "plot: " << plot_path.string() << '\n';
        }
    }
    return 0;
}

int cmd_report(const std::string& name_or_path,
               const std::vector<std::string>& sets, double margin) {
    const Scenario sc = load_with_overrides(name_or_path, sets);
    bool any = false;
    for (int stage : {1, 2}) {
        PulseSchedule sched;
        try {
            sched = stage_schedule(sc, stage);
        } catch (const ConfigError&) {
            continue;  // topology has no such stage, or fields not configured
        }
        any = true;
        std::cout << "stage " << stage << ": ";
        try {
            const AdiabaticityReport rep = adiabaticity_report(sched, margin);
            std::cout << "Lambda = " << format_double(rep.lambda_p)
                      << ", eta = " << format_double(rep.eta)
                      << ", r = " << format_double(rep.r);
            if (rep.a_max) {
                std::cout << ", theta_max = " << format_double(*rep.theta_max)
                          << ", A_max = " << format_double(*rep.a_max)
                          << ", margin = " << format_double(rep.margin);
            } else {
                std::cout << ", no interior adiabaticity maximum";
            }
            std::cout << (rep.satisfied ? "; adiabatic (margin >= "
                                        : "; NOT adiabatic (margin < ")
                      << format_double(margin) << ")\n";
        } catch (const std::domain_error&) {
            std::cout << "resonant drive (zero one-photon detuning); Lambda "
                         "is undefined and the far-detuned criterion does "
                         "not apply\n";
        }
    }
    if (!any) {
        throw ConfigError("no stage with a configured pulse pair to report on");
    }
    return 0;
}

int cmd_list() {
    for (const auto& preset : preset_catalog()) {
        std::cout << preset.name;
        for (std::size_t i = preset.name.size(); i < 20; ++i) std::cout << ' ';
        std::cout << ' ' << preset.summary << '\n';
    }
    return 0;
}

// Display formatter for the ion table: the stored SI values pick up float
// noise when converted back to tabulated units, so round to 10 significant
// digits instead of printing the exact shortest representation.
std::string format_display(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.10g", value);
    return buffer;
}

int cmd_export_ions(const std::string& path) {
    Table table;
    table.set_metadata("units", "wavelengths nm, dipole rates MHz/2pi, "
                                "metastable rates Hz/2pi, temperatures mK, "
                                "masses u");
    table.set_columns({"species", "mass_u", "lambda_a_nm", "lambda_b_nm",
                       "lambda_c_nm", "lambda_d_nm", "gamma21_mhz",
                       "gamma23_mhz", "gamma41_mhz", "gamma43_mhz",
                       "gamma45_mhz", "gamma31_hz", "gamma51_hz",
                       "doppler_mk"});
    for (const auto& ion : ion_database()) {
        table.add_row({ion.name, format_display(ion.mass / units::atomic_mass),
                       format_display(ion.lambda_a * 1e9),
                       format_display(ion.lambda_b * 1e9),
                       format_display(ion.lambda_c * 1e9),
                       format_display(ion.lambda_d * 1e9),
                       format_display(units::rad_to_mhz(ion.gamma_21)),
                       format_display(units::rad_to_mhz(ion.gamma_23)),
                       format_display(units::rad_to_mhz(ion.gamma_41)),
                       format_display(units::rad_to_mhz(ion.gamma_43)),
                       format_display(units::rad_to_mhz(ion.gamma_45)),
                       format_display(ion.gamma_31 / units::two_pi),
                       format_display(ion.gamma_51 / units::two_pi),
                       format_display(ion.doppler_temperature * 1e3)});
    }
    if (path.empty()) {
        table.write(std::cout);
    } else {
        table.write_file(path);
        std::cout << "ion table: " << path << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Double-STIRAP shelving simulator for trapped-ion qubit "
                 "state detection"};
    app.set_version_flag("--version", "stirap 1.0.0");
    app.require_subcommand(1);

    std::string scenario_arg, out_dir, margin_scenario, export_path;
    std::vector<std::string> sets, report_sets;
    bool plot = false;
    int jobs = 0;
    double margin = 5.0;

    CLI::App* run = app.add_subcommand(
        "run", "Execute a scenario file or preset and write its table");
    run->add_option("scenario", scenario_arg,
                    "Scenario file path or preset name")
        ->required();
    run->add_option(
        "--set", sets,
        "Override a setting, e.g. --set stage2.fields.C.detuning_mhz=300");
    run->add_option("--out", out_dir, "Output directory (default: .)");
    run->add_flag("--plot", plot, "Also write an SVG plot");
    run->add_option("--jobs", jobs,
                    "Worker threads (0 = all cores); results are identical "
                    "for any value");

    CLI::App* report = app.add_subcommand(
        "report-adiabaticity",
        "Closed-form adiabaticity check of a scenario's pulse pairs");
    report->add_option("scenario", margin_scenario,
                       "Scenario file path or preset name")
        ->required();
    report->add_option("--set", report_sets, "Override a setting");
    report->add_option("--margin", margin,
                       "Required Lambda / A_max margin (default 5)");

    CLI::App* list =
        app.add_subcommand("list-scenarios", "List the built-in presets");

    CLI::App* export_ions = app.add_subcommand(
        "export-ions", "Write the ion species table (stdout when no path)");
    export_ions->add_option("path", export_path, "Output file path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // --help / --version
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (run->parsed()) {
            return cmd_run(scenario_arg, sets, out_dir, plot, jobs);
        }
        if (report->parsed()) {
            return cmd_report(margin_scenario, report_sets, margin);
        }
        if (list->parsed()) return cmd_list();
        if (export_ions->parsed()) return cmd_export_ions(export_path);
    } catch (const NumericalError& err) {
        std::cerr << "numerical failure: " << err.what() << '\n';
        return 2;
    } catch (const ConfigError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 0;
}
