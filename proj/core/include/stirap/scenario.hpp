#pragma once

// Scenario files: a small INI-style format describing one simulation or
// parameter scan in experimentalist units (MHz, kHz, us, m/s, mK). Parsing
// is strict: unknown sections or keys are rejected. The same dotted paths
// used by the parser drive command-line overrides, plus a few virtual paths
// that move whole pulse pairs at once (stage1.eta, stage2.tau_us, ...).

#include <array>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "stirap/liouvillian.hpp"
#include "stirap/zeeman.hpp"

namespace stirap {

enum class RunKind {
    single,             // one integration, sampled trajectory table
    sweep,              // 1-D scan of any settable path
    amax_scan,          // closed-form adiabaticity maximum over eta
    eta_opt_scan,       // numerically optimal pulse separation
    eigentrack,         // dressed-eigenvalue trajectories over the window
    tau_opt_scan,       // optimal pulse width per Rabi frequency/linewidth
    polarization_scan,  // Zeeman-resolved detection-error surface
};
RunKind parse_run_kind(const std::string& name);
std::string to_string(RunKind kind);

enum class ScenarioTopology { stage1, stage2, five_level, zeeman };
ScenarioTopology parse_topology(const std::string& name);
std::string to_string(ScenarioTopology topology);

struct FieldSettings {
    bool present = false;
    double peak_rabi_mhz = 0.0;  // Omega_0 / 2pi
    double detuning_mhz = 0.0;   // Delta / 2pi
    double center_us = 0.0;
    double width_us = 2.0;       // full width at 1/e of amplitude
    double linewidth_khz = 0.0;  // gamma / 2pi
    double off_fraction = 0.0;   // residual amplitude when nominally off
    // Zeeman topology, field A only: parasitic polarization amplitudes
    // relative to the sigma+ component.
    double sigma_minus_ratio = 0.0;
    double pi_ratio = 0.0;
};

struct MotionSettings {
    double velocity_m_s = 0.0;
    double rf_mhz = 0.0;
    // Micromotion phase at t = 0. When absent the phase is chosen so the
    // Doppler shift peaks midway between the earliest and latest pulse
    // centers (the worst-case alignment used throughout).
    std::optional<double> phase_rad;
};

struct ZeemanSettings {
    double splitting_s_mhz = 0.0;
    double splitting_p_mhz = 0.0;
    double splitting_d_mhz = 0.0;
};

struct SweepSettings {
    std::string parameter;        // settable path, e.g. stage2.two_photon_mhz
    double min = 0.0, max = 0.0;  // grid endpoints (also the eta or sigma-
    int count = 2;                // grid for amax/polarization scans)
    std::string observable = "P5";
    std::vector<double> r_values;          // amax_scan, eta_opt_scan
    std::vector<double> lambda_values;     // eta_opt_scan
    std::vector<double> pi_values;         // polarization_scan
    std::vector<double> omega_values;      // tau_opt_scan, MHz
    std::vector<double> linewidth_values;  // tau_opt_scan, kHz
    double eta_min = 0.3, eta_max = 2.0, eta_step = 0.01;  // eta_opt_scan
    double detuning_mhz = 4000.0;                          // eta_opt_scan
    double tau_us = 2.0;                                   // eta_opt_scan
    double theta_end = 3.0;                                // eta_opt_scan
};

struct OutputSettings {
    std::string table;  // file name for the result table
    std::string plot;   // optional SVG plot file name
};

struct Scenario {
    std::string species = "Ca40";
    std::string name, description;
    RunKind kind = RunKind::single;
    ScenarioTopology topology = ScenarioTopology::stage1;
    std::string initial = "1";  // level "1".."5", or "down"/"up" for zeeman
    double t_start_us = 0.0, t_end_us = 0.0;
    bool decay = true;
    int samples = 0;
    std::array<FieldSettings, 4> fields;  // indexed by letter - 'A'
    MotionSettings motion;
    ZeemanSettings zeeman;
    SweepSettings sweep;
    OutputSettings output;

    FieldSettings& field(char letter);
    const FieldSettings& field(char letter) const;
};

// Parsing and canonical serialization. parse(serialize(s)) reproduces s for
// every scenario serialize emits. origin names the source in error messages.
Scenario parse_scenario(std::istream& in, const std::string& origin);
Scenario parse_scenario_string(const std::string& text,
                               const std::string& origin = "scenario");
Scenario load_scenario(const std::string& path);
std::string serialize_scenario(const Scenario& sc);

// Dotted-path access used by the parser, --set overrides and sweeps.
// Real paths mirror the file layout (run.t_end_us, fields.C.detuning_mhz);
// virtual paths keep derived quantities consistent:
//   stage1.eta, stage2.eta          pulse separation, midpoint preserved
//   stage1.tau_us, stage2.tau_us    pulse width, eta and midpoint preserved
//   stage1.two_photon_mhz, ...      Stokes minus pump detuning
//   stage1.peak_rabi_mhz, ...       both peak amplitudes of the stage
//   stage1.linewidth_khz, ...       both linewidths of the stage
//   all.linewidth_khz               every present field
//   all.off_fraction                every present field
void set_scenario_value(Scenario& sc, const std::string& path,
                        const std::string& value);
std::string get_scenario_value(const Scenario& sc, const std::string& path);
// "path=value" form used by the command line.
void apply_override(Scenario& sc, const std::string& assignment);

// Pump/Stokes field letters of a stage present in the scenario's topology.
std::pair<char, char> stage_letters(const Scenario& sc, int stage);

// The stage's pulse pair as a schedule (rad/s and seconds) for the
// closed-form adiabaticity machinery.
PulseSchedule stage_schedule(const Scenario& sc, int stage);

// Lowering to solver configurations; the single place units are converted.
SystemConfig compile_system(const Scenario& sc);
zeeman::ZeemanConfig compile_zeeman(const Scenario& sc);
int initial_level(const Scenario& sc);     // lambda topologies
int initial_sublevel(const Scenario& sc);  // zeeman topology

// Final-state observables: P1..P5 (level populations), or for the Zeeman
// basis P_down, P_up, P_S, P_P, P_D.
double extract_observable(const DensityMatrix& state, const std::string& name);

} // namespace stirap
