#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "stirap/domain.hpp"
#include "stirap/liouvillian.hpp"

// Zeeman-resolved model of the first STIRAP stage: the eight sublevels of
// S1/2, P1/2 and D3/2. The shelving drive (field A) is nominally sigma+
// polarized with parasitic sigma- and pi admixtures; the Stokes field B is
// pure sigma-. Couplings carry Clebsch-Gordan weights normalized so that a
// component's amplitude is the Rabi frequency of its strongest line:
//
//   sigma+ (A):  S-1/2 -> P+1/2   with -Omega_A+
//   sigma- (A):  S+1/2 -> P-1/2   with +Omega_A-
//   pi     (A):  S-1/2 -> P-1/2   with -Omega_A0
//                S+1/2 -> P+1/2   with +Omega_A0
//   sigma- (B):  D+3/2 -> P+1/2   with  Omega_B
//                D+1/2 -> P-1/2   with  Omega_B / sqrt(3)
//
// The relative signs are the Condon-Shortley ones; they matter because the
// four S/P couplings close an interference loop.

namespace stirap::zeeman {

// Basis order; |down> = S-1/2 and |up> = S+1/2 hold the qubit.
enum Sublevel : int {
    s_down = 0,   // S1/2, m = -1/2
    s_up = 1,     // S1/2, m = +1/2
    p_down = 2,   // P1/2, m = -1/2
    p_up = 3,     // P1/2, m = +1/2
    d_m32 = 4,    // D3/2, m = -3/2
    d_m12 = 5,    // D3/2, m = -1/2
    d_p12 = 6,    // D3/2, m = +1/2
    d_p32 = 7,    // D3/2, m = +3/2
};
inline constexpr int dimension = 8;

struct ZeemanBasis {
    static const std::vector<std::string>& labels();
    static double m_quantum_number(int index);  // magnetic quantum number
};

// Field A with polarization admixtures; the pulse holds the sigma+ peak.
struct PolarizedField {
    GaussianPulse pulse;
    double sigma_minus_ratio = 0.0;  // Omega_A- / Omega_A+
    double pi_ratio = 0.0;           // Omega_A0 / Omega_A+
    double detuning = 0.0;           // rad/s
    double linewidth = 0.0;          // rad/s
};

struct ZeemanConfig {
    IonSpecies species;
    PolarizedField field_a;
    LaserField field_b;  // label 'B'; pure sigma-
    // Linear Zeeman splittings per manifold: level shift = m * value (rad/s).
    double splitting_s = 0.0, splitting_p = 0.0, splitting_d = 0.0;
    TrapMotion motion;
    double t_start = 0.0, t_end = 0.0;
    bool decay_enabled = true;
};

void validate_config(const ZeemanConfig& cfg);

// Coherent generator H(t) (rad/s) in the basis above.
Eigen::MatrixXcd zeeman_generator(const ZeemanConfig& cfg, double t);

EvolveResult evolve(const ZeemanConfig& cfg, const Eigen::MatrixXcd& rho0,
                    const EvolveOptions& opt = {});

// Fluorescence-detection error for one initial qubit state: a shelved |up>
// reads dark (error), an unshelved |down> reads bright (error). Populations
// are taken at the end of the window.
struct DetectionResult {
    double p_ground;   // total S population
    double p_excited;  // total P population
    double p_shelf;    // total D population
    double error;      // 1 - p_shelf for |down>, p_shelf for |up>
};
DetectionResult detection_run(const ZeemanConfig& cfg, int initial_sublevel,
                              const EvolveOptions& opt = {});

// Error surface over polarization-impurity ratios for both initial qubit
// states (the projection error of the shelving step).
struct ProjectionErrorPoint {
    double pi_ratio;
    double sigma_minus_ratio;
    double error_down;  // initial |down>: population left unshelved
    double error_up;    // initial |up>: population shelved by mistake
    double error_total; // max of the two (arbitrary initial qubit state)
};
std::vector<ProjectionErrorPoint> projection_error_scan(
    const ZeemanConfig& base, const std::vector<double>& sigma_minus_ratios,
    const std::vector<double>& pi_ratios, const EvolveOptions& opt = {},
    int jobs = 1);

} // namespace stirap::zeeman
