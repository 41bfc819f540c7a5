#include "stirap/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "stirap/table.hpp"
#include "stirap/units.hpp"

namespace stirap {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& value, const std::string& path) {
    const std::string v = trim(value);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size()) {
        throw ConfigError(path + ": expected a number, got \"" + value + "\"");
    }
    return x;
}

int parse_int(const std::string& value, const std::string& path) {
    const double x = parse_double(value, path);
    const int n = static_cast<int>(x);
    if (static_cast<double>(n) != x) {
        throw ConfigError(path + ": expected an integer, got \"" + value + "\"");
    }
    return n;
}

bool parse_bool(const std::string& value, const std::string& path) {
    const std::string v = trim(value);
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError(path + ": expected true or false, got \"" + value + "\"");
}

std::vector<double> parse_double_list(const std::string& value,
                                      const std::string& path) {
    std::vector<double> out;
    std::istringstream in(value);
    std::string tok;
    while (in >> tok) out.push_back(parse_double(tok, path));
    return out;
}

std::string join(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ' ';
        out += format_double(values[i]);
    }
    return out;
}

const char* bool_name(bool b) { return b ? "true" : "false"; }

// Member lookup for the per-field keys.
double FieldSettings::* field_member(const std::string& key) {
    if (key == "peak_rabi_mhz") return &FieldSettings::peak_rabi_mhz;
    if (key == "detuning_mhz") return &FieldSettings::detuning_mhz;
    if (key == "center_us") return &FieldSettings::center_us;
    if (key == "width_us") return &FieldSettings::width_us;
    if (key == "linewidth_khz") return &FieldSettings::linewidth_khz;
    if (key == "off_fraction") return &FieldSettings::off_fraction;
    if (key == "sigma_minus_ratio") return &FieldSettings::sigma_minus_ratio;
    if (key == "pi_ratio") return &FieldSettings::pi_ratio;
    return nullptr;
}

[[noreturn]] void unknown_path(const std::string& path) {
    throw ConfigError("unknown setting: " + path);
}

// Resolve "X.key" following a "stageN.fields." prefix, checking that the
// letter belongs to the named stage (A, B drive stage 1; C, D stage 2).
FieldSettings& stage_field(Scenario& sc, int stage, const std::string& rest,
                           const std::string& path) {
    if (rest.size() < 3 || rest[1] != '.') unknown_path(path);
    const char letter = rest[0];
    if (letter < 'A' || letter > 'D') unknown_path(path);
    const int owner = (letter <= 'B') ? 1 : 2;
    if (owner != stage) {
        throw ConfigError(std::string("field ") + letter + " belongs to stage" +
                          std::to_string(owner) + ", not stage" +
                          std::to_string(stage));
    }
    return sc.field(letter);
}

struct StagePair {
    FieldSettings* pump;
    FieldSettings* stokes;
};

StagePair stage_fields(Scenario& sc, int stage) {
    const auto [p, s] = stage_letters(sc, stage);
    FieldSettings& pump = sc.field(p);
    FieldSettings& stokes = sc.field(s);
    if (!pump.present || !stokes.present) {
        throw ConfigError(std::string("stage") + std::to_string(stage) +
                          " paths need fields " + p + " and " + s +
                          " to be configured");
    }
    return {&pump, &stokes};
}

void set_stage_value(Scenario& sc, int stage, const std::string& key,
                     const std::string& value, const std::string& path) {
    const auto [pump, stokes] = stage_fields(sc, stage);
    if (key == "eta") {
        const double eta = parse_double(value, path);
        const double tau = pump->width_us;
        const double mid = 0.5 * (pump->center_us + stokes->center_us);
        const double dt = eta * tau / std::numbers::sqrt2;
        pump->center_us = mid + 0.5 * dt;
        stokes->center_us = mid - 0.5 * dt;
    } else if (key == "tau_us") {
        const double tau = parse_double(value, path);
        if (tau <= 0.0) throw ConfigError(path + ": pulse width must be positive");
        const double eta = std::numbers::sqrt2 *
                           (pump->center_us - stokes->center_us) / pump->width_us;
        const double mid = 0.5 * (pump->center_us + stokes->center_us);
        const double dt = eta * tau / std::numbers::sqrt2;
        pump->width_us = stokes->width_us = tau;
        pump->center_us = mid + 0.5 * dt;
        stokes->center_us = mid - 0.5 * dt;
    } else if (key == "two_photon_mhz") {
        stokes->detuning_mhz = pump->detuning_mhz + parse_double(value, path);
    } else if (key == "peak_rabi_mhz") {
        pump->peak_rabi_mhz = stokes->peak_rabi_mhz = parse_double(value, path);
    } else if (key == "linewidth_khz") {
        pump->linewidth_khz = stokes->linewidth_khz = parse_double(value, path);
    } else {
        unknown_path(path);
    }
}

std::string get_stage_value(const Scenario& sc, int stage,
                            const std::string& key, const std::string& path) {
    const auto [pump, stokes] = stage_fields(const_cast<Scenario&>(sc), stage);
    if (key == "eta") {
        return format_double(std::numbers::sqrt2 *
                             (pump->center_us - stokes->center_us) /
                             pump->width_us);
    }
    if (key == "tau_us") return format_double(pump->width_us);
    if (key == "two_photon_mhz") {
        return format_double(stokes->detuning_mhz - pump->detuning_mhz);
    }
    if (key == "peak_rabi_mhz") return format_double(pump->peak_rabi_mhz);
    if (key == "linewidth_khz") return format_double(pump->linewidth_khz);
    unknown_path(path);
}

GaussianPulse compile_pulse(const FieldSettings& f) {
    GaussianPulse p;
    p.peak_rabi = units::mhz_to_rad(f.peak_rabi_mhz);
    p.width = units::us_to_s(f.width_us);
    p.center = units::us_to_s(f.center_us);
    p.residual_floor = f.off_fraction * p.peak_rabi;
    return p;
}

TrapMotion compile_motion(const Scenario& sc) {
    TrapMotion motion;
    motion.peak_velocity = sc.motion.velocity_m_s;
    motion.rf_frequency = units::mhz_to_rad(sc.motion.rf_mhz);
    if (sc.motion.phase_rad) {
        motion.phase = *sc.motion.phase_rad;
    } else {
        // Worst case alignment: Doppler shift extremal midway between the
        // earliest and latest pulse centers.
        double lo = 0.0, hi = 0.0;
        bool first = true;
        for (const auto& f : sc.fields) {
            if (!f.present) continue;
            lo = first ? f.center_us : std::min(lo, f.center_us);
            hi = first ? f.center_us : std::max(hi, f.center_us);
            first = false;
        }
        motion.phase = -motion.rf_frequency * units::us_to_s(0.5 * (lo + hi));
    }
    return motion;
}

std::string allowed_field_letters(ScenarioTopology t) {
    switch (t) {
        case ScenarioTopology::stage1: return "AB";
        case ScenarioTopology::stage2: return "CD";
        case ScenarioTopology::five_level: return "ABCD";
        case ScenarioTopology::zeeman: return "AB";
    }
    return "";
}

} // namespace

RunKind parse_run_kind(const std::string& name) {
    if (name == "single") return RunKind::single;
    if (name == "sweep") return RunKind::sweep;
    if (name == "amax_scan") return RunKind::amax_scan;
    if (name == "eta_opt_scan") return RunKind::eta_opt_scan;
    if (name == "eigentrack") return RunKind::eigentrack;
    if (name == "tau_opt_scan") return RunKind::tau_opt_scan;
    if (name == "polarization_scan") return RunKind::polarization_scan;
    throw ConfigError("unknown run kind: " + name);
}

std::string to_string(RunKind kind) {
    switch (kind) {
        case RunKind::single: return "single";
        case RunKind::sweep: return "sweep";
        case RunKind::amax_scan: return "amax_scan";
        case RunKind::eta_opt_scan: return "eta_opt_scan";
        case RunKind::eigentrack: return "eigentrack";
        case RunKind::tau_opt_scan: return "tau_opt_scan";
        case RunKind::polarization_scan: return "polarization_scan";
    }
    return "";
}

ScenarioTopology parse_topology(const std::string& name) {
    if (name == "stage1") return ScenarioTopology::stage1;
    if (name == "stage2") return ScenarioTopology::stage2;
    if (name == "five_level") return ScenarioTopology::five_level;
    if (name == "zeeman") return ScenarioTopology::zeeman;
    throw ConfigError("unknown topology: " + name);
}

std::string to_string(ScenarioTopology topology) {
    switch (topology) {
        case ScenarioTopology::stage1: return "stage1";
        case ScenarioTopology::stage2: return "stage2";
        case ScenarioTopology::five_level: return "five_level";
        case ScenarioTopology::zeeman: return "zeeman";
    }
    return "";
}

FieldSettings& Scenario::field(char letter) {
    if (letter < 'A' || letter > 'D') {
        throw ConfigError(std::string("no field named ") + letter);
    }
    return fields[letter - 'A'];
}

const FieldSettings& Scenario::field(char letter) const {
    return const_cast<Scenario*>(this)->field(letter);
}

std::pair<char, char> stage_letters(const Scenario& sc, int stage) {
    const bool has1 = sc.topology != ScenarioTopology::stage2;
    const bool has2 = sc.topology == ScenarioTopology::stage2 ||
                      sc.topology == ScenarioTopology::five_level;
    if (stage == 1 && has1) return {'A', 'B'};
    if (stage == 2 && has2) return {'C', 'D'};
    throw ConfigError("topology " + to_string(sc.topology) + " has no stage " +
                      std::to_string(stage));
}

PulseSchedule stage_schedule(const Scenario& sc, int stage) {
    const auto [pump, stokes] = stage_fields(const_cast<Scenario&>(sc), stage);
    PulseSchedule sched;
    sched.tau = units::us_to_s(pump->width_us);
    sched.delta_t = units::us_to_s(pump->center_us - stokes->center_us);
    sched.pump_peak_rabi = units::mhz_to_rad(pump->peak_rabi_mhz);
    sched.stokes_peak_rabi = units::mhz_to_rad(stokes->peak_rabi_mhz);
    sched.pump_detuning = units::mhz_to_rad(pump->detuning_mhz);
    return sched;
}

void set_scenario_value(Scenario& sc, const std::string& path,
                        const std::string& value) {
    const auto dot = path.find('.');
    if (dot == std::string::npos) unknown_path(path);
    const std::string section = path.substr(0, dot);
    const std::string key = path.substr(dot + 1);
    const std::string v = trim(value);

    if (section == "ion") {
        if (key == "species") {
            ion_lookup(v);  // reject unknown species early
            sc.species = v;
            return;
        }
        unknown_path(path);
    }
    if (section == "run") {
        if (key == "name") sc.name = v;
        else if (key == "description") sc.description = v;
        else if (key == "kind") sc.kind = parse_run_kind(v);
        else if (key == "topology") sc.topology = parse_topology(v);
        else if (key == "initial") sc.initial = v;
        else if (key == "t_start_us") sc.t_start_us = parse_double(v, path);
        else if (key == "t_end_us") sc.t_end_us = parse_double(v, path);
        else if (key == "decay") sc.decay = parse_bool(v, path);
        else if (key == "samples") sc.samples = parse_int(v, path);
        else unknown_path(path);
        return;
    }
    if (section == "motion") {
        if (key == "velocity_m_s") sc.motion.velocity_m_s = parse_double(v, path);
        else if (key == "rf_mhz") sc.motion.rf_mhz = parse_double(v, path);
        else if (key == "phase_rad") sc.motion.phase_rad = parse_double(v, path);
        else unknown_path(path);
        return;
    }
    if (section == "zeeman") {
        if (key == "splitting_s_mhz") sc.zeeman.splitting_s_mhz = parse_double(v, path);
        else if (key == "splitting_p_mhz") sc.zeeman.splitting_p_mhz = parse_double(v, path);
        else if (key == "splitting_d_mhz") sc.zeeman.splitting_d_mhz = parse_double(v, path);
        else unknown_path(path);
        return;
    }
    if (section == "sweep") {
        SweepSettings& sw = sc.sweep;
        if (key == "parameter") sw.parameter = v;
        else if (key == "min") sw.min = parse_double(v, path);
        else if (key == "max") sw.max = parse_double(v, path);
        else if (key == "count") sw.count = parse_int(v, path);
        else if (key == "observable") sw.observable = v;
        else if (key == "r_values") sw.r_values = parse_double_list(v, path);
        else if (key == "lambda_values") sw.lambda_values = parse_double_list(v, path);
        else if (key == "pi_values") sw.pi_values = parse_double_list(v, path);
        else if (key == "omega_values") sw.omega_values = parse_double_list(v, path);
        else if (key == "linewidth_values") sw.linewidth_values = parse_double_list(v, path);
        else if (key == "eta_min") sw.eta_min = parse_double(v, path);
        else if (key == "eta_max") sw.eta_max = parse_double(v, path);
        else if (key == "eta_step") sw.eta_step = parse_double(v, path);
        else if (key == "detuning_mhz") sw.detuning_mhz = parse_double(v, path);
        else if (key == "tau_us") sw.tau_us = parse_double(v, path);
        else if (key == "theta_end") sw.theta_end = parse_double(v, path);
        else unknown_path(path);
        return;
    }
    if (section == "output") {
        if (key == "table") sc.output.table = v;
        else if (key == "plot") sc.output.plot = v;
        else unknown_path(path);
        return;
    }
    if (section == "stage1" || section == "stage2") {
        const int stage = section[5] - '0';
        if (key.rfind("fields.", 0) == 0) {
            FieldSettings& f = stage_field(sc, stage, key.substr(7), path);
            const auto member = field_member(key.substr(9));
            if (!member) unknown_path(path);
            f.*member = parse_double(v, path);
            f.present = true;
            return;
        }
        set_stage_value(sc, stage, key, v, path);
        return;
    }
    if (section == "all") {
        if (key != "linewidth_khz" && key != "off_fraction") unknown_path(path);
        const double x = parse_double(v, path);
        for (auto& f : sc.fields) {
            if (!f.present) continue;
            if (key == "linewidth_khz") f.linewidth_khz = x;
            else f.off_fraction = x;
        }
        return;
    }
    unknown_path(path);
}

std::string get_scenario_value(const Scenario& sc, const std::string& path) {
    const auto dot = path.find('.');
    if (dot == std::string::npos) unknown_path(path);
    const std::string section = path.substr(0, dot);
    const std::string key = path.substr(dot + 1);

    if (section == "ion" && key == "species") return sc.species;
    if (section == "run") {
        if (key == "name") return sc.name;
        if (key == "description") return sc.description;
        if (key == "kind") return to_string(sc.kind);
        if (key == "topology") return to_string(sc.topology);
        if (key == "initial") return sc.initial;
        if (key == "t_start_us") return format_double(sc.t_start_us);
        if (key == "t_end_us") return format_double(sc.t_end_us);
        if (key == "decay") return bool_name(sc.decay);
        if (key == "samples") return std::to_string(sc.samples);
        unknown_path(path);
    }
    if (section == "motion") {
        if (key == "velocity_m_s") return format_double(sc.motion.velocity_m_s);
        if (key == "rf_mhz") return format_double(sc.motion.rf_mhz);
        if (key == "phase_rad") {
            return sc.motion.phase_rad ? format_double(*sc.motion.phase_rad)
                                       : std::string("auto");
        }
        unknown_path(path);
    }
    if (section == "zeeman") {
        if (key == "splitting_s_mhz") return format_double(sc.zeeman.splitting_s_mhz);
        if (key == "splitting_p_mhz") return format_double(sc.zeeman.splitting_p_mhz);
        if (key == "splitting_d_mhz") return format_double(sc.zeeman.splitting_d_mhz);
        unknown_path(path);
    }
    if (section == "sweep") {
        const SweepSettings& sw = sc.sweep;
        if (key == "parameter") return sw.parameter;
        if (key == "min") return format_double(sw.min);
        if (key == "max") return format_double(sw.max);
        if (key == "count") return std::to_string(sw.count);
        if (key == "observable") return sw.observable;
        if (key == "r_values") return join(sw.r_values);
        if (key == "lambda_values") return join(sw.lambda_values);
        if (key == "pi_values") return join(sw.pi_values);
        if (key == "omega_values") return join(sw.omega_values);
        if (key == "linewidth_values") return join(sw.linewidth_values);
        if (key == "eta_min") return format_double(sw.eta_min);
        if (key == "eta_max") return format_double(sw.eta_max);
        if (key == "eta_step") return format_double(sw.eta_step);
        if (key == "detuning_mhz") return format_double(sw.detuning_mhz);
        if (key == "tau_us") return format_double(sw.tau_us);
        if (key == "theta_end") return format_double(sw.theta_end);
        unknown_path(path);
    }
    if (section == "output") {
        if (key == "table") return sc.output.table;
        if (key == "plot") return sc.output.plot;
        unknown_path(path);
    }
    if (section == "stage1" || section == "stage2") {
        const int stage = section[5] - '0';
        if (key.rfind("fields.", 0) == 0) {
            const FieldSettings& f =
                stage_field(const_cast<Scenario&>(sc), stage, key.substr(7), path);
            const auto member = field_member(key.substr(9));
            if (!member) unknown_path(path);
            return format_double(f.*member);
        }
        return get_stage_value(sc, stage, key, path);
    }
    unknown_path(path);
}

void apply_override(Scenario& sc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("override must look like path=value: " + assignment);
    }
    set_scenario_value(sc, trim(assignment.substr(0, eq)),
                       assignment.substr(eq + 1));
}

Scenario parse_scenario(std::istream& in, const std::string& origin) {
    static const std::vector<std::string> sections = {
        "ion",           "run",   "stage1.fields.A", "stage1.fields.B",
        "stage2.fields.C", "stage2.fields.D", "motion", "zeeman",
        "sweep",         "output"};
    Scenario sc;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string at = origin + ":" + std::to_string(lineno) + ": ";
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError(at + "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (std::find(sections.begin(), sections.end(), section) ==
                sections.end()) {
                throw ConfigError(at + "unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(at + "expected key = value, got \"" + s + "\"");
        }
        if (section.empty()) {
            throw ConfigError(at + "key outside of any [section]");
        }
        try {
            set_scenario_value(sc, section + "." + trim(s.substr(0, eq)),
                               s.substr(eq + 1));
        } catch (const ConfigError& err) {
            throw ConfigError(at + err.what());
        }
    }
    return sc;
}

Scenario parse_scenario_string(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    return parse_scenario(in, origin);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path);
    return parse_scenario(in, path);
}

std::string serialize_scenario(const Scenario& sc) {
    std::ostringstream out;
    const auto emit = [&](const std::string& path) {
        out << path.substr(path.rfind('.') + 1) << " = "
            << get_scenario_value(sc, path) << '\n';
    };

    out << "[ion]\n";
    emit("ion.species");
    out << "\n[run]\n";
    if (!sc.name.empty()) emit("run.name");
    if (!sc.description.empty()) emit("run.description");
    emit("run.kind");
    emit("run.topology");
    emit("run.initial");
    emit("run.t_start_us");
    emit("run.t_end_us");
    emit("run.decay");
    emit("run.samples");

    for (char letter = 'A'; letter <= 'D'; ++letter) {
        const FieldSettings& f = sc.field(letter);
        if (!f.present) continue;
        const std::string section = std::string("stage") +
                                    (letter <= 'B' ? '1' : '2') + ".fields." +
                                    letter;
        const std::string prefix = section + ".";
        out << "\n[" << section << "]\n";
        for (const char* key : {"peak_rabi_mhz", "detuning_mhz", "center_us",
                                "width_us", "linewidth_khz", "off_fraction"}) {
            emit(prefix + key);
        }
        if (sc.topology == ScenarioTopology::zeeman && letter == 'A') {
            emit(prefix + "sigma_minus_ratio");
            emit(prefix + "pi_ratio");
        }
    }

    if (sc.motion.velocity_m_s != 0.0 || sc.motion.rf_mhz != 0.0) {
        out << "\n[motion]\n";
        emit("motion.velocity_m_s");
        emit("motion.rf_mhz");
        if (sc.motion.phase_rad) emit("motion.phase_rad");
    }

    if (sc.topology == ScenarioTopology::zeeman) {
        out << "\n[zeeman]\n";
        emit("zeeman.splitting_s_mhz");
        emit("zeeman.splitting_p_mhz");
        emit("zeeman.splitting_d_mhz");
    }

    std::vector<std::string> sweep_keys;
    switch (sc.kind) {
        case RunKind::single:
        case RunKind::eigentrack:
            break;
        case RunKind::sweep:
            sweep_keys = {"parameter", "min", "max", "count", "observable"};
            break;
        case RunKind::amax_scan:
            sweep_keys = {"min", "max", "count", "r_values"};
            break;
        case RunKind::eta_opt_scan:
            sweep_keys = {"lambda_values", "r_values", "eta_min", "eta_max",
                          "eta_step", "detuning_mhz", "tau_us", "theta_end"};
            break;
        case RunKind::tau_opt_scan:
            sweep_keys = {"omega_values", "linewidth_values"};
            break;
        case RunKind::polarization_scan:
            sweep_keys = {"min", "max", "count", "pi_values"};
            break;
    }
    if (!sweep_keys.empty()) {
        out << "\n[sweep]\n";
        for (const auto& key : sweep_keys) emit("sweep." + key);
    }

    if (!sc.output.table.empty() || !sc.output.plot.empty()) {
        out << "\n[output]\n";
        if (!sc.output.table.empty()) emit("output.table");
        if (!sc.output.plot.empty()) emit("output.plot");
    }
    return out.str();
}

SystemConfig compile_system(const Scenario& sc) {
    if (sc.topology == ScenarioTopology::zeeman) {
        throw ConfigError("the zeeman topology compiles to a ZeemanConfig");
    }
    SystemConfig cfg;
    switch (sc.topology) {
        case ScenarioTopology::stage1: cfg.topology = Topology::stage1_lambda; break;
        case ScenarioTopology::stage2: cfg.topology = Topology::stage2_lambda; break;
        default: cfg.topology = Topology::five_level; break;
    }
    cfg.species = ion_lookup(sc.species);
    const std::string allowed = allowed_field_letters(sc.topology);
    for (char letter = 'A'; letter <= 'D'; ++letter) {
        const FieldSettings& f = sc.field(letter);
        if (!f.present) continue;
        if (allowed.find(letter) == std::string::npos) {
            throw ConfigError(std::string("field ") + letter +
                              " is not part of topology " + to_string(sc.topology));
        }
        LaserField lf;
        lf.label = letter;
        lf.role = (letter == 'A' || letter == 'C') ? FieldRole::pump
                                                   : FieldRole::stokes;
        lf.pulse = compile_pulse(f);
        lf.detuning = units::mhz_to_rad(f.detuning_mhz);
        lf.linewidth = units::khz_to_rad(f.linewidth_khz);
        cfg.fields.push_back(lf);
    }
    cfg.motion = compile_motion(sc);
    cfg.t_start = units::us_to_s(sc.t_start_us);
    cfg.t_end = units::us_to_s(sc.t_end_us);
    cfg.decay_enabled = sc.decay;
    validate_config(cfg);
    return cfg;
}

zeeman::ZeemanConfig compile_zeeman(const Scenario& sc) {
    if (sc.topology != ScenarioTopology::zeeman) {
        throw ConfigError("scenario topology is not zeeman");
    }
    const FieldSettings& fa = sc.field('A');
    const FieldSettings& fb = sc.field('B');
    if (!fa.present || !fb.present) {
        throw ConfigError("the zeeman topology needs fields A and B");
    }
    for (char letter : {'C', 'D'}) {
        if (sc.field(letter).present) {
            throw ConfigError(std::string("field ") + letter +
                              " is not part of topology zeeman");
        }
    }
    zeeman::ZeemanConfig cfg;
    cfg.species = ion_lookup(sc.species);
    cfg.field_a.pulse = compile_pulse(fa);
    cfg.field_a.sigma_minus_ratio = fa.sigma_minus_ratio;
    cfg.field_a.pi_ratio = fa.pi_ratio;
    cfg.field_a.detuning = units::mhz_to_rad(fa.detuning_mhz);
    cfg.field_a.linewidth = units::khz_to_rad(fa.linewidth_khz);
    cfg.field_b.label = 'B';
    cfg.field_b.role = FieldRole::stokes;
    cfg.field_b.pulse = compile_pulse(fb);
    cfg.field_b.detuning = units::mhz_to_rad(fb.detuning_mhz);
    cfg.field_b.linewidth = units::khz_to_rad(fb.linewidth_khz);
    cfg.splitting_s = units::mhz_to_rad(sc.zeeman.splitting_s_mhz);
    cfg.splitting_p = units::mhz_to_rad(sc.zeeman.splitting_p_mhz);
    cfg.splitting_d = units::mhz_to_rad(sc.zeeman.splitting_d_mhz);
    cfg.motion = compile_motion(sc);
    cfg.t_start = units::us_to_s(sc.t_start_us);
    cfg.t_end = units::us_to_s(sc.t_end_us);
    cfg.decay_enabled = sc.decay;
    zeeman::validate_config(cfg);
    return cfg;
}

int initial_level(const Scenario& sc) {
    const int level = parse_int(sc.initial, "run.initial");
    if (level < 1 || level > 5) {
        throw ConfigError("run.initial: level must be 1..5, got " + sc.initial);
    }
    return level;
}

int initial_sublevel(const Scenario& sc) {
    if (sc.initial == "down" || sc.initial == "s_down") return zeeman::s_down;
    if (sc.initial == "up" || sc.initial == "s_up") return zeeman::s_up;
    throw ConfigError("run.initial: expected down or up, got " + sc.initial);
}

double extract_observable(const DensityMatrix& state, const std::string& name) {
    const auto find = [&](const std::string& label) {
        for (std::size_t i = 0; i < state.labels.size(); ++i) {
            if (state.labels[i] == label) return static_cast<int>(i);
        }
        return -1;
    };
    if (name.size() == 2 && name[0] == 'P' && name[1] >= '1' && name[1] <= '5') {
        const int i = find(name.substr(1));
        if (i < 0) {
            throw ConfigError("observable " + name + " is not in this basis");
        }
        return state.population(i);
    }
    if (name == "P_down" || name == "P_up") {
        const int i = find(name == "P_down" ? "S-1/2" : "S+1/2");
        if (i < 0) {
            throw ConfigError("observable " + name + " needs the zeeman basis");
        }
        return state.population(i);
    }
    if (name == "P_S" || name == "P_P" || name == "P_D") {
        double sum = 0.0;
        bool any = false;
        for (std::size_t i = 0; i < state.labels.size(); ++i) {
            if (state.labels[i].size() > 1 && state.labels[i][0] == name[2]) {
                sum += state.population(static_cast<int>(i));
                any = true;
            }
        }
        if (!any) {
            throw ConfigError("observable " + name + " needs the zeeman basis");
        }
        return sum;
    }
    throw ConfigError("unknown observable: " + name);
}

} // namespace stirap
