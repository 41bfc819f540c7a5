#include "stirap/presets.hpp"

#include <filesystem>

namespace stirap {

namespace {

FieldSettings make_field(double rabi_mhz, double detuning_mhz, double center_us,
                         double width_us = 2.0, double linewidth_khz = 0.0,
                         double off_fraction = 0.0) {
    FieldSettings f;
    f.present = true;
    f.peak_rabi_mhz = rabi_mhz;
    f.detuning_mhz = detuning_mhz;
    f.center_us = center_us;
    f.width_us = width_us;
    f.linewidth_khz = linewidth_khz;
    f.off_fraction = off_fraction;
    return f;
}

Scenario base_scenario(const std::string& name, const std::string& description) {
    Scenario sc;
    sc.name = name;
    sc.description = description;
    sc.output.table = name + ".tsv";
    sc.output.plot = name + ".svg";
    return sc;
}

Scenario fig3_amax() {
    Scenario sc = base_scenario(
        "fig3_amax",
        "Closed-form adiabaticity maximum A_max versus pulse separation");
    sc.kind = RunKind::amax_scan;
    sc.topology = ScenarioTopology::stage2;
    sc.initial = "3";
    sc.t_start_us = -1.0;
    sc.t_end_us = 1.0;
    sc.sweep.min = 0.05;
    sc.sweep.max = 2.0;
    sc.sweep.count = 40;
    sc.sweep.r_values = {1.0, 2.0, 4.0};
    return sc;
}

Scenario fig4_eta_opt() {
    Scenario sc = base_scenario(
        "fig4_eta_opt",
        "Optimal pulse separation and transfer inefficiency versus pulse ratio");
    sc.kind = RunKind::eta_opt_scan;
    sc.topology = ScenarioTopology::stage1;
    sc.initial = "1";
    sc.t_start_us = -3.0;
    sc.t_end_us = 3.0;
    sc.sweep.lambda_values = {1.0, 10.0};
    sc.sweep.r_values = {0.5, 1.0, 2.0};
    return sc;
}

Scenario fig5_delay() {
    Scenario sc = base_scenario(
        "fig5_delay",
        "Shelving transfer versus pulse separation, resonant second stage");
    sc.kind = RunKind::sweep;
    sc.topology = ScenarioTopology::five_level;
    sc.initial = "3";
    sc.t_start_us = -8.0;
    sc.t_end_us = 8.0;
    sc.field('C') = make_field(100.0, 0.0, 0.6);
    sc.field('D') = make_field(100.0, 0.0, -0.6);
    sc.sweep.parameter = "stage2.eta";
    sc.sweep.min = -2.5;
    sc.sweep.max = 2.5;
    sc.sweep.count = 101;
    sc.sweep.observable = "P5";
    return sc;
}

Scenario fig6_two_photon() {
    Scenario sc = base_scenario(
        "fig6_two_photon",
        "Shelving transfer versus two-photon detuning of the C and D lasers");
    sc.kind = RunKind::sweep;
    sc.topology = ScenarioTopology::five_level;
    sc.initial = "3";
    sc.t_start_us = -6.0;
    sc.t_end_us = 6.0;
    sc.field('C') = make_field(100.0, 600.0, 0.6);
    sc.field('D') = make_field(100.0, 600.0, -0.6);
    sc.sweep.parameter = "stage2.two_photon_mhz";
    sc.sweep.min = -4.0;
    sc.sweep.max = 4.0;
    sc.sweep.count = 81;
    sc.sweep.observable = "P5";
    return sc;
}

Scenario fig7_eigentrack() {
    Scenario sc = base_scenario(
        "fig7_eigentrack",
        "Dressed-state eigenvalues across the pulse sequence, unbalanced drive");
    sc.kind = RunKind::eigentrack;
    sc.topology = ScenarioTopology::stage2;
    sc.initial = "3";
    sc.t_start_us = -4.0;
    sc.t_end_us = 4.0;
    sc.samples = 801;
    sc.field('C') = make_field(100.0, 600.0, 0.6);
    sc.field('D') = make_field(200.0, 602.0, -0.6);
    return sc;
}

Scenario fig8_linewidth() {
    Scenario sc = base_scenario(
        "fig8_linewidth",
        "Shelving transfer versus laser linewidth of the C and D lasers");
    sc.kind = RunKind::sweep;
    sc.topology = ScenarioTopology::five_level;
    sc.initial = "3";
    sc.t_start_us = -6.0;
    sc.t_end_us = 6.0;
    sc.field('C') = make_field(100.0, 600.0, 0.6);
    sc.field('D') = make_field(100.0, 600.0, -0.6);
    sc.sweep.parameter = "stage2.linewidth_khz";
    sc.sweep.min = 0.0;
    sc.sweep.max = 20.0;
    sc.sweep.count = 41;
    sc.sweep.observable = "P5";
    return sc;
}

Scenario fig9_pulsewidth() {
    Scenario sc = base_scenario(
        "fig9_pulsewidth",
        "Shelving transfer versus pulse width at a 2 kHz laser linewidth");
    sc.kind = RunKind::sweep;
    sc.topology = ScenarioTopology::five_level;
    sc.initial = "3";
    sc.t_start_us = -14.0;
    sc.t_end_us = 14.0;
    sc.field('C') = make_field(100.0, 600.0, 0.6, 2.0, 2.0);
    sc.field('D') = make_field(100.0, 600.0, -0.6, 2.0, 2.0);
    sc.sweep.parameter = "stage2.tau_us";
    sc.sweep.min = 0.25;
    sc.sweep.max = 6.0;
    sc.sweep.count = 24;
    sc.sweep.observable = "P5";
    return sc;
}

Scenario fig10_tau_opt() {
    Scenario sc = base_scenario(
        "fig10_tau_opt",
        "Optimal pulse width versus Rabi frequency, with and without linewidth");
    sc.kind = RunKind::tau_opt_scan;
    sc.topology = ScenarioTopology::five_level;
    sc.initial = "3";
    sc.t_start_us = -6.0;
    sc.t_end_us = 6.0;
    sc.field('C') = make_field(100.0, 600.0, 0.6);
    sc.field('D') = make_field(100.0, 600.0, -0.6);
    sc.sweep.omega_values = {50.0, 100.0, 200.0, 300.0};
    sc.sweep.linewidth_values = {0.0, 2.0};
    return sc;
}

Scenario fig11_residual() {
    Scenario sc = base_scenario(
        "fig11_residual",
        "Shelving transfer versus peak Rabi frequency with residual light");
    sc.kind = RunKind::sweep;
    sc.topology = ScenarioTopology::five_level;
    sc.initial = "3";
    sc.t_start_us = -10.0;
    sc.t_end_us = 10.0;
    sc.field('C') = make_field(100.0, 600.0, 0.6, 2.0, 0.0, 0.02);
    sc.field('D') = make_field(100.0, 600.0, -0.6, 2.0, 0.0, 0.02);
    sc.sweep.parameter = "stage2.peak_rabi_mhz";
    sc.sweep.min = 10.0;
    sc.sweep.max = 200.0;
    sc.sweep.count = 20;
    sc.sweep.observable = "P5";
    return sc;
}

Scenario fig12_micromotion() {
    Scenario sc = base_scenario(
        "fig12_micromotion",
        "First-stage transfer versus micromotion velocity in a Paul trap");
    sc.kind = RunKind::sweep;
    sc.topology = ScenarioTopology::stage1;
    sc.initial = "1";
    sc.t_start_us = -6.0;
    sc.t_end_us = 6.0;
    sc.field('A') = make_field(100.0, 600.0, 0.65);
    sc.field('B') = make_field(100.0, 600.0, -0.65);
    sc.motion.rf_mhz = 16.8;
    sc.sweep.parameter = "motion.velocity_m_s";
    sc.sweep.min = 0.0;
    sc.sweep.max = 3.0;
    sc.sweep.count = 31;
    sc.sweep.observable = "P3";
    return sc;
}

Scenario fig14_polarization() {
    Scenario sc = base_scenario(
        "fig14_polarization",
        "Qubit detection error versus polarization impurity, Zeeman-resolved");
    sc.kind = RunKind::polarization_scan;
    sc.topology = ScenarioTopology::zeeman;
    sc.initial = "down";
    sc.t_start_us = -4.7;
    sc.t_end_us = 4.7;
    sc.field('A') = make_field(300.0, 300.0, 0.65);
    sc.field('B') = make_field(300.0, 300.0, -0.65);
    sc.sweep.min = 0.0;
    sc.sweep.max = 0.1;
    sc.sweep.count = 21;
    sc.sweep.pi_values = {0.0, 0.01, 0.03, 0.05};
    return sc;
}

Scenario fig15_full() {
    Scenario sc = base_scenario(
        "fig15_full",
        "Full two-stage shelving with linewidth, residual light and micromotion");
    sc.kind = RunKind::sweep;
    sc.topology = ScenarioTopology::five_level;
    sc.initial = "1";
    sc.t_start_us = -15.0;
    sc.t_end_us = 15.0;
    sc.field('A') = make_field(100.0, 600.0, -4.4, 2.0, 2.0, 0.01);
    sc.field('B') = make_field(100.0, 600.0, -5.6, 2.0, 2.0, 0.01);
    sc.field('C') = make_field(100.0, 600.0, 5.6, 2.0, 2.0, 0.01);
    sc.field('D') = make_field(100.0, 600.0, 4.4, 2.0, 2.0, 0.01);
    sc.motion.velocity_m_s = 0.4;
    sc.motion.rf_mhz = 16.7;
    sc.sweep.parameter = "stage1.two_photon_mhz";
    sc.sweep.min = -0.25;
    sc.sweep.max = 0.10;
    sc.sweep.count = 36;
    sc.sweep.observable = "P5";
    return sc;
}

} // namespace

const std::vector<PresetInfo>& preset_catalog() {
    static const std::vector<PresetInfo> catalog = [] {
        std::vector<PresetInfo> out;
        for (Scenario (*build)() : {fig3_amax, fig4_eta_opt, fig5_delay,
                                    fig6_two_photon, fig7_eigentrack,
                                    fig8_linewidth, fig9_pulsewidth,
                                    fig10_tau_opt, fig11_residual,
                                    fig12_micromotion, fig14_polarization,
                                    fig15_full}) {
            Scenario sc = build();
            out.push_back({sc.name, sc.description, std::move(sc)});
        }
        return out;
    }();
    return catalog;
}

const PresetInfo* find_preset(const std::string& name) {
    std::string key = name;
    if (key.rfind("figures/", 0) == 0) key = key.substr(8);
    const PresetInfo* prefix_match = nullptr;
    int prefix_hits = 0;
    for (const auto& preset : preset_catalog()) {
        if (preset.name == key) return &preset;
        // Unique-prefix match in either direction, so both the abbreviation
        // "fig6" and a decorated name like "fig5_delay_scan" resolve.
        if (preset.name.rfind(key, 0) == 0 || key.rfind(preset.name, 0) == 0) {
            prefix_match = &preset;
            ++prefix_hits;
        }
    }
    return prefix_hits == 1 ? prefix_match : nullptr;
}

Scenario find_scenario(const std::string& name_or_path) {
    if (std::filesystem::exists(name_or_path)) {
        return load_scenario(name_or_path);
    }
    if (const PresetInfo* preset = find_preset(name_or_path)) {
        return preset->scenario;
    }
    throw ConfigError("no scenario file or preset named \"" + name_or_path +
                      "\" (list-scenarios shows the presets)");
}

} // namespace stirap
