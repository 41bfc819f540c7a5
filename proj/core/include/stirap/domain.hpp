#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "stirap/errors.hpp"
#include "stirap/units.hpp"

// Domain model for double-STIRAP shelving in alkali earth(-like) ions.
//
// Level labels used throughout (bare states, fine-structure manifolds):
//   1 = S1/2 (ground, qubit |down>), 2 = P1/2, 3 = D3/2, 4 = P3/2, 5 = D5/2.
// Laser fields by letter and the transition they drive:
//   A: 1-2 (stage-1 pump), B: 3-2 (stage-1 Stokes),
//   C: 3-4 (stage-2 pump), D: 5-4 (stage-2 Stokes).

namespace stirap {

struct IonSpecies {
    std::string name;  // e.g. "Ca40"
    double mass;       // kg

    // Transition wavelengths for fields A..D, meters.
    double lambda_a, lambda_b, lambda_c, lambda_d;

    // Dipole decay rates, rad/s.
    double gamma_21, gamma_23;            // P1/2 -> S1/2, D3/2
    double gamma_41, gamma_43, gamma_45;  // P3/2 -> S1/2, D3/2, D5/2
    // Metastable D-state rates, rad/s. Negligible on pulse timescales and
    // not included in the dynamics; kept as reference data.
    double gamma_31, gamma_51;

    double doppler_temperature;  // K

    double wavelength(char field) const;  // field in {'A','B','C','D'}

    // Total decay rate out of P1/2 and P3/2.
    double gamma_2() const { return gamma_21 + gamma_23; }
    double gamma_4() const { return gamma_41 + gamma_43 + gamma_45; }
};

// Embedded species database (Ca40, Sr88, Ba138, Hg202).
const IonSpecies& ion_lookup(const std::string& name);  // throws ConfigError
const std::vector<IonSpecies>& ion_database();

// Thermal micromotion amplitude: kinetic energy at temperature T maps to a
// peak velocity through (1/2) m v^2 = (1/2) kB T.
double micromotion_velocity_from_temperature(const IonSpecies& ion, double temperature);
double temperature_from_micromotion_velocity(const IonSpecies& ion, double velocity);

struct GaussianPulse {
    double peak_rabi = 0.0;       // Omega_0, rad/s
    double width = 0.0;           // tau, full width at 1/e of amplitude, s
    double center = 0.0;          // s
    double residual_floor = 0.0;  // Omega_off, rad/s (imperfect extinction)

    // Omega(t) = max(Omega_0 exp(-((t - t0)/(tau/2))^2), Omega_off)
    double amplitude(double t) const {
        const double u = (t - center) / (0.5 * width);
        return std::max(peak_rabi * std::exp(-u * u), residual_floor);
    }
};

inline double pulse_amplitude(const GaussianPulse& p, double t) { return p.amplitude(t); }

enum class FieldRole { pump, stokes };

struct LaserField {
    char label = 'A';  // 'A'..'D', selects transition and wavelength
    FieldRole role = FieldRole::pump;
    GaussianPulse pulse;
    double detuning = 0.0;   // rad/s, at zero micromotion velocity
    double linewidth = 0.0;  // rad/s, phase-diffusion dephasing rate

    // Transition (lower, upper) in level labels for this field letter.
    std::pair<int, int> transition() const;
};

// One STIRAP stage: pump/Stokes Gaussian pair with common width tau and
// center separation delta_t (pump center at +delta_t/2 relative to the
// Stokes center, so positive delta_t is the counterintuitive order).
struct PulseSchedule {
    double tau = 0.0;               // s
    double delta_t = 0.0;           // s
    double pump_peak_rabi = 0.0;    // rad/s
    double stokes_peak_rabi = 0.0;  // rad/s
    double pump_detuning = 0.0;     // rad/s (one-photon detuning of the stage)

    // Scaled pulse separation eta = sqrt(2) delta_t / tau.
    double eta() const { return std::numbers::sqrt2 * delta_t / tau; }

    // Peak amplitude ratio r = Omega_pump0 / Omega_stokes0.
    double ratio() const { return pump_peak_rabi / stokes_peak_rabi; }

    // Adiabaticity parameter Lambda; undefined on one-photon resonance.
    double adiabaticity_lambda() const;

    static double delta_t_from_eta(double eta, double tau) {
        return eta * tau / std::numbers::sqrt2;
    }
};

struct TrapMotion {
    double peak_velocity = 0.0;  // m/s, micromotion velocity amplitude
    double rf_frequency = 0.0;   // rad/s, trap drive
    double phase = 0.0;          // rad, micromotion phase at t = 0

    bool enabled() const { return peak_velocity != 0.0 && rf_frequency != 0.0; }

    // First-order Doppler detuning modulation for a laser of wavelength
    // lambda: delta(t) = delta(0) - v (2pi/lambda) cos(Omega_rf t + phase).
    double detuning_shift(double wavelength, double t) const {
        if (!enabled()) return 0.0;
        return -peak_velocity * (units::two_pi / wavelength) *
               std::cos(rf_frequency * t + phase);
    }
};

} // namespace stirap
