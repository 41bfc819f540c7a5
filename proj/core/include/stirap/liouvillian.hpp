#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "stirap/domain.hpp"
#include "stirap/errors.hpp"
#include "stirap/ode.hpp"

// Optical Bloch equations for the Lambda-chain systems:
//   d(rho)/dt = -i [H(t), rho] + D(rho) + Phi(rho)
// with D the spontaneous-decay dissipator (jump operators sqrt(Gamma_fk)
// |k><f| for the dipole channels 2->1, 2->3, 4->1, 4->3, 4->5) and Phi the
// laser phase-diffusion dephaser. In the rotating frame each basis state
// carries an integer combination of laser phases; a coherence rho_ij dephases
// at gamma_ij = sum_f gamma_f (c_if - c_jf)^2 where c_f are those integer
// coefficients and gamma_f the linewidth of laser f.
//
// Restricted topologies keep only decay channels whose endpoints both lie in
// the modeled basis, so the trace is conserved exactly. The 3-level stage-2
// model therefore omits the P3/2 -> S1/2 leak; use the five-level topology
// when that channel matters.

namespace stirap {

enum class Topology {
    stage1_lambda,  // levels {1,2,3}, fields A,B
    stage2_lambda,  // levels {3,4,5}, fields C,D
    five_level,     // levels {1..5}, any of fields A..D
};

struct SystemConfig {
    Topology topology = Topology::five_level;
    IonSpecies species;
    std::vector<LaserField> fields;
    TrapMotion motion;
    double t_start = 0.0;  // s
    double t_end = 0.0;    // s
    bool decay_enabled = true;

    std::vector<int> levels() const;  // global level labels in basis order
    int index_of_level(int level) const;
    std::vector<std::string> level_labels() const;
    const LaserField* field(char label) const;  // nullptr if absent
};

// Throws ConfigError on inconsistent topology/field combinations.
void validate_config(const SystemConfig& cfg);

struct DensityMatrix {
    Eigen::MatrixXcd rho;
    std::vector<std::string> labels;

    static DensityMatrix pure(const std::vector<std::string>& labels, int index);

    double population(int index) const { return rho(index, index).real(); }
    double trace_real() const { return rho.trace().real(); }

    // Trace, Hermiticity and positivity checks; throws NumericalError.
    void validate(double trace_tol = 1e-8, double herm_tol = 1e-9,
                  double pos_tol = 1e-8) const;
};

struct DecayChannel {
    int from, to;  // local basis indices
    double rate;   // rad/s
};

// Coherent part: H(t) in rad/s for the configured basis, including pulse
// envelopes, rotating-frame detunings and micromotion Doppler modulation.
Eigen::MatrixXcd coherent_generator(const SystemConfig& cfg, double t);

// Spontaneous-decay superoperator D.
struct Dissipator {
    std::vector<DecayChannel> channels;
    Eigen::MatrixXd coherence_decay;  // (Gamma_i + Gamma_j)/2 per element

    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;
};
Dissipator dissipator(const SystemConfig& cfg);

// Phase-diffusion dephaser Phi; populations are untouched.
struct Dephaser {
    Eigen::MatrixXd rates;  // gamma_ij, zero diagonal

    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;
};
Dephaser dephaser(const SystemConfig& cfg);

struct EvolveOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    double max_step = 0.0;  // 0: narrowest pulse width / 50
    int samples = 0;        // trajectory sample count; 0 stores only the end
    std::size_t max_steps = 400'000'000;
};

struct EvolveResult {
    std::vector<double> times;
    std::vector<Eigen::MatrixXcd> states;
    std::vector<std::string> labels;
    OdeStats stats;

    const Eigen::MatrixXcd& final_state() const { return states.back(); }
    DensityMatrix at(std::size_t i) const { return {states[i], labels}; }
};

EvolveResult evolve(const SystemConfig& cfg, const Eigen::MatrixXcd& rho0,
                    const EvolveOptions& opt = {});

// Convenience: start in pure |initial_level>, integrate the configured
// window, return the final population of |target_level| (global labels).
double transfer_efficiency(const SystemConfig& cfg, int initial_level,
                           int target_level, const EvolveOptions& opt = {});

} // namespace stirap
