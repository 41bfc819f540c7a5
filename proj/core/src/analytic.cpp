#include "stirap/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stirap/errors.hpp"
#include "stirap/liouvillian.hpp"
#include "parallel.hpp"

namespace stirap {

namespace {

// log(r e^{2 eta theta} + r^{-1} e^{-2 eta theta}), overflow-safe.
double log_envelope_sum(double theta, double eta, double r) {
    const double u = 2.0 * eta * theta + std::log(r);
    const double a = std::max(u, -u);
    return a + std::log1p(std::exp(-2.0 * a));
}

} // namespace

Eigen::Matrix3d lambda_hamiltonian(double omega_a, double omega_b,
                                   double delta_a, double delta_b) {
    Eigen::Matrix3d h;
    h << 0.0, 0.5 * omega_a, 0.0,
         0.5 * omega_a, delta_a, 0.5 * omega_b,
         0.0, 0.5 * omega_b, delta_a - delta_b;
    return h;
}

DressedState dressed_eigensystem(double omega_a, double omega_b, double delta_a) {
    const double s = omega_a * omega_a + omega_b * omega_b;
    if (s <= 0.0) {
        throw std::domain_error("dressed eigensystem needs a nonzero Rabi frequency");
    }
    const double root = std::sqrt(delta_a * delta_a + s);
    DressedState d;
    d.omega_plus = 0.5 * (delta_a + root);
    d.omega_minus = 0.5 * (delta_a - root);
    d.omega_dark = 0.0;
    d.alpha = std::atan2(omega_a, omega_b);
    d.beta = std::atan2(std::sqrt(-d.omega_minus), std::sqrt(d.omega_plus));

    const double sa = std::sin(d.alpha), ca = std::cos(d.alpha);
    const double sb = std::sin(d.beta), cb = std::cos(d.beta);
    d.plus << sa * sb, cb, ca * sb;
    d.dark << ca, 0.0, -sa;
    d.minus << sa * cb, -sb, ca * cb;
    return d;
}

double mixing_angle(double theta, double eta, double r) {
    return std::atan(r * std::exp(2.0 * eta * theta));
}

double mixing_angle_derivative(double theta, double eta, double r) {
    return 2.0 * eta * std::exp(-log_envelope_sum(theta, eta, r));
}

double scaled_lambda_minus(double theta, double eta, double r, double lambda) {
    return -2.0 * lambda *
           std::exp(log_envelope_sum(theta, eta, r) - theta * theta - eta * eta);
}

double adiabaticity_function(double theta, double eta, double r) {
    return std::abs(eta) *
           std::exp(theta * theta + eta * eta -
                    2.0 * log_envelope_sum(theta, eta, r));
}

std::optional<double> solve_theta_max(double eta, double r) {
    if (!(eta > 0.5) || !(r > 0.0)) return std::nullopt;

    // ln A is stationary where f(theta) = theta - 2 eta tanh(u) = 0 with
    // u = 2 eta theta + ln r, and the stationary point is a maximum only
    // where d2(ln A)/dtheta2 = 2 - 8 eta^2 sech^2(u) < 0, i.e. |u| <
    // arccosh(2 eta). On that interval f is strictly decreasing, so at most
    // one maximum exists.
    const double log_r = std::log(r);
    if (log_r == 0.0) return 0.0;  // f(0) = 0 and 0 is interior for eta > 1/2

    const double u_bar = std::acosh(2.0 * eta);
    double lo = (-u_bar - log_r) / (2.0 * eta);
    double hi = (u_bar - log_r) / (2.0 * eta);
    const auto f = [&](double theta) {
        return theta - 2.0 * eta * std::tanh(2.0 * eta * theta + log_r);
    };
    double f_lo = f(lo), f_hi = f(hi);
    if (!(f_lo >= 0.0 && f_hi <= 0.0)) return std::nullopt;

    for (int i = 0; i < 200 && (hi - lo) > 1e-16 * std::max(1.0, std::abs(lo)); ++i) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = f(mid);
        if (f_mid >= 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double theta = 0.5 * (lo + hi);
    for (int i = 0; i < 3; ++i) {  // Newton polish
        const double u = 2.0 * eta * theta + log_r;
        const double sech = 1.0 / std::cosh(u);
        const double fp = 1.0 - 4.0 * eta * eta * sech * sech;
        if (fp == 0.0) break;
        theta -= f(theta) / fp;
    }
    return theta;
}

std::optional<double> adiabaticity_max(double eta, double r) {
    const auto theta = solve_theta_max(eta, r);
    if (!theta) return std::nullopt;
    return adiabaticity_function(*theta, eta, r);
}

double lambda_parameter(double omega_pump0, double omega_stokes0, double tau,
                        double delta) {
    if (delta == 0.0) {
        throw std::domain_error(
            "adiabaticity parameter Lambda is undefined on one-photon resonance");
    }
    return omega_pump0 * omega_stokes0 * tau /
           (16.0 * std::numbers::sqrt2 * std::abs(delta));
}

double analytic_transfer_probability(double eta, double r, double theta_end) {
    return 1.0 / (1.0 + std::exp(-4.0 * eta * theta_end) / (r * r));
}

double dephasing_prediction(double gamma_35, double tau, double delta_t) {
    if (delta_t <= 0.0) {
        throw std::domain_error(
            "the dephasing prediction needs a positive pulse separation");
    }
    return 1.0 / 3.0 +
           (2.0 / 3.0) * std::exp(-3.0 * gamma_35 * tau * tau / (16.0 * delta_t));
}

AdiabaticityReport adiabaticity_report(const PulseSchedule& schedule,
                                       double required_margin) {
    AdiabaticityReport rep;
    rep.lambda_p = schedule.adiabaticity_lambda();
    rep.eta = schedule.eta();
    rep.r = schedule.ratio();
    rep.theta_max = solve_theta_max(rep.eta, rep.r);
    if (rep.theta_max) {
        rep.a_max = adiabaticity_function(*rep.theta_max, rep.eta, rep.r);
        rep.margin = rep.lambda_p / *rep.a_max;
        rep.satisfied = rep.margin >= required_margin;
    } else {
        rep.a_max = std::nullopt;
        rep.margin = std::numeric_limits<double>::quiet_NaN();
        rep.satisfied = false;
    }
    return rep;
}

EigenTrackResult general_eigentrack(
    const std::function<Eigen::MatrixXcd(double)>& hamiltonian,
    const std::vector<double>& times) {
    if (times.size() < 2) {
        throw ConfigError("eigentracking needs at least two time samples");
    }
    EigenTrackResult result;
    result.times = times;
    result.min_overlap = 1.0;

    Eigen::MatrixXcd h = hamiltonian(times.front());
    const int n = static_cast<int>(h.rows());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    Eigen::MatrixXcd prev = es.eigenvectors();
    result.eigenvalues.push_back(es.eigenvalues());
    for (int b = 0; b < n; ++b) {
        result.branch_labels.push_back("branch_" + std::to_string(b + 1));
    }

    for (std::size_t k = 1; k < times.size(); ++k) {
        es.compute(hamiltonian(times[k]));
        const Eigen::MatrixXcd& w = es.eigenvectors();
        Eigen::MatrixXd overlap = (prev.adjoint() * w).cwiseAbs();

        // Greedy global assignment of new eigenvectors to tracked branches.
        std::vector<int> branch_of(n, -1);
        std::vector<bool> row_used(n, false), col_used(n, false);
        double worst = 1.0;
        for (int pick = 0; pick < n; ++pick) {
            int bi = -1, bj = -1;
            double best = -1.0;
            for (int i = 0; i < n; ++i) {
                if (row_used[i]) continue;
                for (int j = 0; j < n; ++j) {
                    if (col_used[j]) continue;
                    if (overlap(i, j) > best) {
                        best = overlap(i, j);
                        bi = i;
                        bj = j;
                    }
                }
            }
            row_used[bi] = true;
            col_used[bj] = true;
            branch_of[bi] = bj;
            worst = std::min(worst, best);
        }
        result.min_overlap = std::min(result.min_overlap, worst);
        if (worst < 0.5) {
            throw NumericalError(
                "eigenstate tracking lost a branch at t = " +
                    std::to_string(times[k]) + " s (overlap " +
                    std::to_string(worst) + " < 0.5); refine the time grid",
                times[k]);
        }

        Eigen::VectorXd vals(n);
        Eigen::MatrixXcd reordered(n, n);
        for (int b = 0; b < n; ++b) {
            vals(b) = es.eigenvalues()(branch_of[b]);
            reordered.col(b) = w.col(branch_of[b]);
        }
        result.eigenvalues.push_back(vals);
        prev = reordered;
    }
    return result;
}

std::pair<double, double> rabi_amplitudes_for_lambda(double lambda, double r,
                                                     double detuning, double tau) {
    if (lambda <= 0.0 || r <= 0.0 || tau <= 0.0 || detuning == 0.0) {
        throw std::domain_error(
            "Rabi amplitudes need lambda > 0, r > 0, tau > 0 and a nonzero detuning");
    }
    const double stokes = std::sqrt(16.0 * std::numbers::sqrt2 * lambda *
                                    std::abs(detuning) / (tau * r));
    return {r * stokes, stokes};
}

namespace {

double coherent_transfer(double lambda, double r, double eta,
                         const OptimalEtaOptions& opt) {
    const auto [omega_pump, omega_stokes] =
        rabi_amplitudes_for_lambda(lambda, r, opt.detuning, opt.tau);
    const double delta_t = PulseSchedule::delta_t_from_eta(eta, opt.tau);
    const double t_end = opt.theta_end * opt.tau / std::sqrt(8.0);

    SystemConfig cfg;
    cfg.topology = Topology::stage1_lambda;
    cfg.species = ion_lookup("Ca40");  // decay disabled; species data unused
    cfg.decay_enabled = false;
    cfg.t_start = -t_end;
    cfg.t_end = t_end;

    LaserField pump;
    pump.label = 'A';
    pump.role = FieldRole::pump;
    pump.pulse = {omega_pump, opt.tau, 0.5 * delta_t, 0.0};
    pump.detuning = opt.detuning;
    LaserField stokes;
    stokes.label = 'B';
    stokes.role = FieldRole::stokes;
    stokes.pulse = {omega_stokes, opt.tau, -0.5 * delta_t, 0.0};
    stokes.detuning = opt.detuning;
    cfg.fields = {pump, stokes};

    EvolveOptions evolve_opt;
    evolve_opt.rtol = opt.rtol;
    evolve_opt.atol = opt.atol;
    return transfer_efficiency(cfg, 1, 3, evolve_opt);
}

} // namespace

OptimalEtaResult optimal_eta(double lambda, double r, const OptimalEtaOptions& opt) {
    if (!(opt.eta_max > opt.eta_min) || !(opt.eta_step > 0.0)) {
        throw ConfigError("optimal_eta needs an ascending eta grid");
    }
    const int count =
        static_cast<int>(std::floor((opt.eta_max - opt.eta_min) / opt.eta_step + 0.5)) + 1;

    OptimalEtaResult result;
    result.grid.resize(count);
    detail::parallel_for_indexed(count, opt.jobs, [&](std::size_t i) {
        const double eta = opt.eta_min + static_cast<double>(i) * opt.eta_step;
        result.grid[i] = {eta, coherent_transfer(lambda, r, eta, opt)};
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < result.grid.size(); ++i) {
        if (result.grid[i].second > result.grid[best].second) best = i;
    }

    // Golden-section refinement inside the bracketing grid cells.
    double a = result.grid[best > 0 ? best - 1 : best].first;
    double b = result.grid[std::min(best + 1, result.grid.size() - 1)].first;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = coherent_transfer(lambda, r, x1, opt);
    double f2 = coherent_transfer(lambda, r, x2, opt);
    while (b - a > 5e-4) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = coherent_transfer(lambda, r, x2, opt);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = coherent_transfer(lambda, r, x1, opt);
        }
    }
    result.eta_opt = 0.5 * (a + b);
    result.efficiency = std::max({f1, f2, result.grid[best].second});
    return result;
}

} // namespace stirap
