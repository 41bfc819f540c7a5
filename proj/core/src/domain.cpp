#include "stirap/domain.hpp"

#include <cmath>

namespace stirap {

namespace {

using units::atomic_mass;
using units::mhz_to_rad;
using units::mk_to_k;
using units::nm_to_m;
using units::two_pi;

// Hz (not MHz) for the metastable D-state rates.
constexpr double hz_to_rad(double f_hz) { return two_pi * f_hz; }

std::vector<IonSpecies> make_database() {
    std::vector<IonSpecies> db;
    db.push_back({"Ca40", 40.0 * atomic_mass,
                  nm_to_m(397), nm_to_m(866), nm_to_m(850), nm_to_m(854),
                  mhz_to_rad(21), mhz_to_rad(1.7),
                  mhz_to_rad(22), mhz_to_rad(0.18), mhz_to_rad(1.6),
                  hz_to_rad(0.15), hz_to_rad(0.15),
                  mk_to_k(0.50)});
    db.push_back({"Sr88", 88.0 * atomic_mass,
                  nm_to_m(422), nm_to_m(1092), nm_to_m(1004), nm_to_m(1033),
                  mhz_to_rad(20), mhz_to_rad(1.5),
                  mhz_to_rad(23), mhz_to_rad(0.18), mhz_to_rad(1.4),
                  hz_to_rad(0.40), hz_to_rad(0.46),
                  mk_to_k(0.49)});
    db.push_back({"Ba138", 138.0 * atomic_mass,
                  nm_to_m(493), nm_to_m(650), nm_to_m(585), nm_to_m(614),
                  mhz_to_rad(14), mhz_to_rad(5.3),
                  mhz_to_rad(19), mhz_to_rad(0.76), mhz_to_rad(5.9),
                  hz_to_rad(0.009), hz_to_rad(0.003),
                  mk_to_k(0.35)});
    db.push_back({"Hg202", 202.0 * atomic_mass,
                  nm_to_m(194), nm_to_m(10670), nm_to_m(991), nm_to_m(398),
                  mhz_to_rad(69), mhz_to_rad(0.05),
                  mhz_to_rad(168), mhz_to_rad(0.48), mhz_to_rad(40),
                  hz_to_rad(1.62), hz_to_rad(7.96),
                  mk_to_k(1.7)});
    return db;
}

} // namespace

const std::vector<IonSpecies>& ion_database() {
    static const std::vector<IonSpecies> db = make_database();
    return db;
}

const IonSpecies& ion_lookup(const std::string& name) {
    for (const auto& ion : ion_database()) {
        if (ion.name == name) return ion;
    }
    std::string known;
    for (const auto& ion : ion_database()) {
        if (!known.empty()) known += ", ";
        known += ion.name;
    }
    throw ConfigError("unknown ion species '" + name + "' (known species: " + known + ")");
}

double IonSpecies::wavelength(char field) const {
    switch (field) {
        case 'A': return lambda_a;
        case 'B': return lambda_b;
        case 'C': return lambda_c;
        case 'D': return lambda_d;
        default: throw ConfigError(std::string("unknown field label '") + field + "'");
    }
}

double micromotion_velocity_from_temperature(const IonSpecies& ion, double temperature) {
    if (temperature < 0.0) throw ConfigError("temperature must be non-negative");
    return std::sqrt(units::boltzmann * temperature / ion.mass);
}

double temperature_from_micromotion_velocity(const IonSpecies& ion, double velocity) {
    return ion.mass * velocity * velocity / units::boltzmann;
}

std::pair<int, int> LaserField::transition() const {
    switch (label) {
        case 'A': return {1, 2};
        case 'B': return {3, 2};
        case 'C': return {3, 4};
        case 'D': return {5, 4};
        default: throw ConfigError(std::string("unknown field label '") + label + "'");
    }
}

double PulseSchedule::adiabaticity_lambda() const {
    if (pump_detuning == 0.0) {
        throw std::domain_error(
            "adiabaticity parameter Lambda is undefined on one-photon resonance");
    }
    return pump_peak_rabi * stokes_peak_rabi * tau /
           (16.0 * std::numbers::sqrt2 * std::abs(pump_detuning));
}

} // namespace stirap
