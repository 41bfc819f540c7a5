#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "stirap/liouvillian.hpp"
#include "stirap/ode.hpp"

// Shared fixed-dimension master-equation propagator. A generator type Gen
// supplies the coherent part via gen.build(t, H) for the matching matrix
// size; dissipation enters as a precomputed elementwise decay-rate matrix
// (coherence decay plus dephasing) and a list of population-feed channels.

namespace stirap::detail {

struct DissipationData {
    Eigen::MatrixXd rate;  // R_ij = (Gamma_i + Gamma_j)/2 + gamma_ij
    std::vector<DecayChannel> channels;
};

template <int N, class Gen>
class MasterRhs {
public:
    using State = Eigen::Matrix<std::complex<double>, N, N>;

    MasterRhs(const Gen& gen, const DissipationData& dis, bool dissipative)
        : gen_(gen), dissipative_(dissipative) {
        if (dissipative_) {
            rate_ = dis.rate.cast<std::complex<double>>();
            channels_ = dis.channels;
        }
        h_.setZero();
    }

    void operator()(double t, const State& rho, State& drho) {
        gen_.build(t, h_);
        m_.noalias() = h_ * rho;
        drho = std::complex<double>(0.0, -1.0) * (m_ - m_.adjoint());
        if (dissipative_) {
            drho -= rate_.cwiseProduct(rho);
            for (const auto& ch : channels_) {
                drho(ch.to, ch.to) += ch.rate * rho(ch.from, ch.from);
            }
        }
    }

private:
    const Gen& gen_;
    bool dissipative_;
    State rate_;
    std::vector<DecayChannel> channels_;
    State h_, m_;
};

template <int N, class Gen>
EvolveResult evolve_fixed(const Gen& gen, const DissipationData& dis,
                          const Eigen::MatrixXcd& rho0, double t0, double t1,
                          const EvolveOptions& opt, double default_max_step,
                          std::vector<std::string> labels) {
    using State = Eigen::Matrix<std::complex<double>, N, N>;
    const bool dissipative =
        !dis.channels.empty() ||
        (dis.rate.size() > 0 && dis.rate.cwiseAbs().maxCoeff() > 0.0);

    MasterRhs<N, Gen> rhs(gen, dis, dissipative);
    State y = rho0;

    std::vector<double> sample_times;
    if (opt.samples > 1) {
        sample_times.reserve(opt.samples);
        for (int i = 0; i < opt.samples; ++i) {
            sample_times.push_back(t0 + (t1 - t0) * i / (opt.samples - 1));
        }
    } else {
        sample_times.push_back(t1);
    }

    EvolveResult result;
    result.labels = std::move(labels);
    result.times.reserve(sample_times.size());
    result.states.reserve(sample_times.size());

    OdeOptions ode;
    ode.rtol = opt.rtol;
    ode.atol = opt.atol;
    ode.max_step = (opt.max_step > 0.0) ? opt.max_step : default_max_step;
    ode.max_steps = opt.max_steps;

    DormandPrince5<State> stepper(y);
    result.stats = stepper.integrate(
        rhs, y, t0, t1, ode, sample_times, [&](double t, const State& s) {
            result.times.push_back(t);
            result.states.push_back(Eigen::MatrixXcd(s));
        });
    return result;
}

} // namespace stirap::detail
