#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stirap/domain.hpp"
#include "stirap/units.hpp"

// Closed-form three-level STIRAP theory in the scaled variables
//   theta = sqrt(8) t / tau,  eta = sqrt(2) delta_t / tau,
//   r = Omega_pump0 / Omega_stokes0,
// where tau is the common full width at 1/e of the Gaussian pair and delta_t
// the pump-after-Stokes center separation. The mixing angle obeys
// tan(alpha) = r exp(2 eta theta) and the local adiabaticity demand is
// A(theta; eta, r) << Lambda with Lambda the peak-amplitude adiabaticity
// parameter.

namespace stirap {

// Two-photon-resonant Lambda Hamiltonian in the {|1>,|2>,|3>} basis (rad/s),
// optionally with a two-photon detuning through delta_b != delta_a.
Eigen::Matrix3d lambda_hamiltonian(double omega_a, double omega_b,
                                   double delta_a, double delta_b);

struct DressedState {
    double omega_plus, omega_dark, omega_minus;  // eigenvalues, rad/s
    Eigen::Vector3d plus, dark, minus;           // eigenvectors, {1,2,3} basis
    double alpha, beta;                          // mixing angles, rad
};

// Closed-form eigensystem on two-photon resonance.
DressedState dressed_eigensystem(double omega_a, double omega_b, double delta_a);

// Mixing angle and its scaled-time derivative.
double mixing_angle(double theta, double eta, double r);
double mixing_angle_derivative(double theta, double eta, double r);

// Scaled dressed splitting lambda_minus = omega_minus tau / sqrt(8) in units
// of Lambda: lambda_minus = -2 Lambda (r e^{2 eta theta} + r^{-1} e^{-2 eta
// theta}) exp(-(theta^2 + eta^2)).
double scaled_lambda_minus(double theta, double eta, double r, double lambda);

// Local adiabaticity function A(theta; eta, r).
double adiabaticity_function(double theta, double eta, double r);

// Interior maximum of A along theta (stationary point of the transcendental
// condition 2 tanh(2 eta theta + ln r) = theta / eta that is a local
// maximum). No solution exists for eta <= 1/2, or for strongly asymmetric
// pulse pairs at small eta.
std::optional<double> solve_theta_max(double eta, double r);
std::optional<double> adiabaticity_max(double eta, double r);

// Peak adiabaticity parameter Lambda = Omega_p0 Omega_s0 tau /
// (16 sqrt(2) |delta|); throws std::domain_error on resonance.
double lambda_parameter(double omega_pump0, double omega_stokes0, double tau,
                        double delta);

// Transfer efficiency of the ideal dark-state following for an experiment
// that ends at scaled time theta_end.
double analytic_transfer_probability(double eta, double r, double theta_end);

// Linewidth-limited double-STIRAP efficiency: P5 = 1/3 + (2/3)
// exp(-3 gamma_35 tau^2 / (16 delta_t)) for the two-photon dephasing rate
// gamma_35 (sum of the stage's laser linewidths).
double dephasing_prediction(double gamma_35, double tau, double delta_t);

struct AdiabaticityReport {
    double lambda_p;  // Lambda
    double eta;
    double r;
    std::optional<double> theta_max;
    std::optional<double> a_max;
    double margin;    // Lambda / A_max (infinite when no interior maximum)
    bool satisfied;   // margin >= required_margin
};

// Throws std::domain_error when the stage is on one-photon resonance.
AdiabaticityReport adiabaticity_report(const PulseSchedule& schedule,
                                       double required_margin = 5.0);

// Numerical eigensystem tracking for an arbitrary Hermitian generator
// sampled on a time grid. Branches are connected by eigenvector overlap;
// tracking fails (NumericalError) if the best overlap drops below 0.5.
struct EigenTrackResult {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> eigenvalues;  // one entry per time, branch order
    std::vector<std::string> branch_labels;    // ascending at the first sample
    double min_overlap;                        // worst matched overlap seen
};
EigenTrackResult general_eigentrack(
    const std::function<Eigen::MatrixXcd(double)>& hamiltonian,
    const std::vector<double>& times);

// Numerical optimum of the pulse separation: scans eta on a grid, then
// refines by golden section around the best grid point. The figure-of-merit
// integration follows the coherent protocol (no decay, no dephasing) with
// Gaussian pulses truncated by an experiment window ending at theta_end.
struct OptimalEtaOptions {
    double detuning = units::mhz_to_rad(4000.0);  // one-photon, rad/s
    double tau = 2e-6;                            // s
    double eta_min = 0.3, eta_max = 2.0, eta_step = 0.01;
    double theta_end = 3.0;  // scaled experiment end time Theta
    double rtol = 1e-9, atol = 1e-12;
    int jobs = 1;
};

struct OptimalEtaResult {
    double eta_opt;
    double efficiency;
    std::vector<std::pair<double, double>> grid;  // (eta, P3) samples
};

OptimalEtaResult optimal_eta(double lambda, double r,
                             const OptimalEtaOptions& opt = {});

// Pump/Stokes peak amplitudes realizing (lambda, r) at the given detuning
// and pulse width: Omega_s0 = sqrt(16 sqrt(2) lambda |delta| / (tau r)).
std::pair<double, double> rabi_amplitudes_for_lambda(double lambda, double r,
                                                     double detuning, double tau);

} // namespace stirap
