#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "stirap/analytic.hpp"
#include "stirap/errors.hpp"
#include "stirap/units.hpp"

using namespace stirap;
using units::mhz_to_rad;
using units::khz_to_rad;

TEST_SUITE("analytic") {

TEST_CASE("lambda Hamiltonian layout") {
    const double wa = mhz_to_rad(80.0), wb = mhz_to_rad(30.0);
    const double da = mhz_to_rad(600.0), db = mhz_to_rad(598.5);
    const Eigen::Matrix3d h = lambda_hamiltonian(wa, wb, da, db);
    CHECK(h(0, 0) == 0.0);
    CHECK(h(0, 1) == 0.5 * wa);
    CHECK(h(0, 2) == 0.0);
    CHECK(h(1, 1) == da);
    CHECK(h(1, 2) == 0.5 * wb);
    CHECK(h(2, 2) == da - db);
    CHECK((h - h.transpose()).norm() == 0.0);
}

TEST_CASE("dressed eigensystem matches the closed form") {
    // Omega_A = Omega_B = 2pi 100 MHz at Delta = 2pi 600 MHz:
    // omega_minus = (Delta - sqrt(Delta^2 + 2 Omega^2)) / 2 = -2pi 8.2207 MHz.
    const double w = mhz_to_rad(100.0);
    const double d = mhz_to_rad(600.0);
    const DressedState ds = dressed_eigensystem(w, w, d);

    const double root = std::sqrt(d * d + 2.0 * w * w);
    CHECK(ds.omega_plus == doctest::Approx(0.5 * (d + root)).epsilon(1e-12));
    CHECK(ds.omega_minus == doctest::Approx(0.5 * (d - root)).epsilon(1e-12));
    CHECK(ds.omega_dark == 0.0);
    CHECK(units::rad_to_mhz(ds.omega_minus) ==
          doctest::Approx(-8.2207001484).epsilon(1e-9));

    // Dark state: (cos a, 0, -sin a) with tan a = Omega_A / Omega_B.
    CHECK(ds.alpha == doctest::Approx(units::pi / 4).epsilon(1e-12));
    CHECK(ds.dark[0] == doctest::Approx(std::cos(ds.alpha)).epsilon(1e-12));
    CHECK(ds.dark[1] == 0.0);
    CHECK(ds.dark[2] == doctest::Approx(-std::sin(ds.alpha)).epsilon(1e-12));

    const Eigen::Matrix3d h = lambda_hamiltonian(w, w, d, d);
    CHECK((h * ds.dark).norm() / h.norm() < 1e-14);
    CHECK((h * ds.plus - ds.omega_plus * ds.plus).norm() / h.norm() < 1e-12);
    CHECK((h * ds.minus - ds.omega_minus * ds.minus).norm() / h.norm() < 1e-12);
}

TEST_CASE("resonant dressed splitting is the rms Rabi frequency") {
    const double wa = mhz_to_rad(60.0), wb = mhz_to_rad(80.0);
    const DressedState ds = dressed_eigensystem(wa, wb, 0.0);
    const double wrms = std::sqrt(wa * wa + wb * wb);
    CHECK(ds.omega_plus == doctest::Approx(0.5 * wrms).epsilon(1e-12));
    CHECK(ds.omega_minus == doctest::Approx(-0.5 * wrms).epsilon(1e-12));
}

TEST_CASE("dressed eigensystem rejects a dead stage") {
    CHECK_THROWS_AS(dressed_eigensystem(0.0, 0.0, mhz_to_rad(600.0)),
                    std::domain_error);
}

TEST_CASE("mixing angle obeys tan(alpha) = r exp(2 eta theta)") {
    CHECK(mixing_angle(0.0, 0.85, 1.0) == doctest::Approx(units::pi / 4).epsilon(1e-12));
    for (double theta : {-1.5, -0.2, 0.0, 0.4, 2.0}) {
        for (double r : {0.5, 1.0, 3.0}) {
            const double a = mixing_angle(theta, 0.85, r);
            CHECK(std::tan(a) ==
                  doctest::Approx(r * std::exp(2.0 * 0.85 * theta)).epsilon(1e-10));
        }
    }
    // Pump-only limit alpha -> pi/2, Stokes-only limit alpha -> 0.
    CHECK(mixing_angle(50.0, 0.85, 1.0) == doctest::Approx(units::pi / 2).epsilon(1e-9));
    CHECK(mixing_angle(-50.0, 0.85, 1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("mixing angle derivative matches a central difference") {
    const double eps = 1e-6;
    for (double theta : {-1.0, 0.0, 0.7}) {
        for (double r : {0.5, 2.0}) {
            const double fd = (mixing_angle(theta + eps, 1.1, r) -
                               mixing_angle(theta - eps, 1.1, r)) /
                              (2.0 * eps);
            CHECK(mixing_angle_derivative(theta, 1.1, r) ==
                  doctest::Approx(fd).epsilon(1e-7));
        }
    }
}

TEST_CASE("scaled lambda_minus follows its closed form") {
    for (double theta : {-0.8, 0.0, 1.3}) {
        for (double r : {0.5, 1.0, 2.0}) {
            const double eta = 0.9, lambda = 9.3;
            const double expected = -2.0 * lambda *
                                    (r * std::exp(2.0 * eta * theta) +
                                     std::exp(-2.0 * eta * theta) / r) *
                                    std::exp(-(theta * theta + eta * eta));
            CHECK(scaled_lambda_minus(theta, eta, r, lambda) ==
                  doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("adiabaticity function: frozen value and internal consistency") {
    // A(0, eta, 1) = eta e^{eta^2} / 4.
    CHECK(adiabaticity_function(0.0, 0.7, 1.0) ==
          doctest::Approx(0.7 * std::exp(0.49) / 4.0).epsilon(1e-12));
    CHECK(adiabaticity_function(0.0, 0.7, 1.0) ==
          doctest::Approx(0.2856553384921909).epsilon(1e-12));

    // A = Lambda alpha' / |lambda_minus| for any Lambda.
    for (double theta : {-1.0, 0.2, 1.5}) {
        for (double r : {0.25, 1.0, 4.0}) {
            const double eta = 1.05, lambda = 7.0;
            const double expected = lambda * mixing_angle_derivative(theta, eta, r) /
                                    std::abs(scaled_lambda_minus(theta, eta, r, lambda));
            CHECK(adiabaticity_function(theta, eta, r) ==
                  doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("interior adiabaticity maximum") {
    SUBCASE("no interior maximum at small separation") {
        CHECK_FALSE(solve_theta_max(0.5, 1.0).has_value());
        CHECK_FALSE(solve_theta_max(0.3, 2.0).has_value());
        CHECK_FALSE(adiabaticity_max(0.4, 1.0).has_value());
    }
    SUBCASE("symmetric pulses peak at theta = 0") {
        auto t = solve_theta_max(0.8, 1.0);
        REQUIRE(t.has_value());
        CHECK(*t == 0.0);
    }
    SUBCASE("stationarity residual") {
        for (auto [eta, r] : std::vector<std::pair<double, double>>{
                 {0.9, 2.0}, {1.2, 0.5}, {0.7, 1.5}}) {
            auto t = solve_theta_max(eta, r);
            REQUIRE(t.has_value());
            const double u = 2.0 * eta * *t + std::log(r);
            CHECK(std::abs(*t - 2.0 * eta * std::tanh(u)) < 1e-10);
            // Local maximum on a grid around it.
            const double a0 = adiabaticity_function(*t, eta, r);
            CHECK(a0 >= adiabaticity_function(*t - 0.01, eta, r));
            CHECK(a0 >= adiabaticity_function(*t + 0.01, eta, r));
        }
    }
    SUBCASE("A_max is symmetric under r -> 1/r") {
        for (double eta : {0.8, 1.2}) {
            for (double r : {2.0, 4.0}) {
                auto up = adiabaticity_max(eta, r);
                auto down = adiabaticity_max(eta, 1.0 / r);
                REQUIRE(up.has_value());
                REQUIRE(down.has_value());
                CHECK(*up == doctest::Approx(*down).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("Lambda arithmetic") {
    const double tau = 2e-6;
    // Omega = 2pi 100 MHz, Delta = 2pi 600 MHz: Lambda = 9.256.
    CHECK(lambda_parameter(mhz_to_rad(100.0), mhz_to_rad(100.0), tau,
                           mhz_to_rad(600.0)) ==
          doctest::Approx(9.256006121163265).epsilon(1e-12));
    // Doubling the Stokes amplitude doubles Lambda.
    CHECK(lambda_parameter(mhz_to_rad(100.0), mhz_to_rad(200.0), tau,
                           mhz_to_rad(600.0)) ==
          doctest::Approx(18.51201224232653).epsilon(1e-12));
    // Doubling the detuning halves it.
    CHECK(lambda_parameter(mhz_to_rad(100.0), mhz_to_rad(100.0), tau,
                           mhz_to_rad(1200.0)) ==
          doctest::Approx(4.628003060581633).epsilon(1e-12));
    // Sign of the detuning is irrelevant.
    CHECK(lambda_parameter(mhz_to_rad(100.0), mhz_to_rad(100.0), tau,
                           mhz_to_rad(-600.0)) ==
          doctest::Approx(9.256006121163265).epsilon(1e-12));
    CHECK_THROWS_AS(lambda_parameter(mhz_to_rad(100.0), mhz_to_rad(100.0), tau, 0.0),
                    std::domain_error);
}

TEST_CASE("rabi_amplitudes_for_lambda round trip") {
    const double tau = 2e-6, delta = mhz_to_rad(600.0);
    for (double lambda : {4.6, 9.3, 18.5}) {
        for (double r : {0.5, 1.0, 2.0}) {
            auto [wp, ws] = rabi_amplitudes_for_lambda(lambda, r, delta, tau);
            CHECK(wp / ws == doctest::Approx(r).epsilon(1e-12));
            CHECK(lambda_parameter(wp, ws, tau, delta) ==
                  doctest::Approx(lambda).epsilon(1e-12));
        }
    }
}

TEST_CASE("ideal dark-state transfer probability") {
    // P3 = 1 / (1 + e^{-4 eta Theta} / r^2).
    CHECK(analytic_transfer_probability(0.85, 1.0, 3.0) ==
          doctest::Approx(1.0 / (1.0 + std::exp(-4.0 * 0.85 * 3.0))).epsilon(1e-12));
    // Larger windows only help; r > 1 starts closer to the target.
    CHECK(analytic_transfer_probability(0.85, 1.0, 4.0) >
          analytic_transfer_probability(0.85, 1.0, 2.0));
    CHECK(analytic_transfer_probability(0.85, 2.0, 3.0) >
          analytic_transfer_probability(0.85, 1.0, 3.0));
    // Theta -> infinity saturates at 1.
    CHECK(analytic_transfer_probability(0.85, 1.0, 60.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dephasing prediction") {
    const double tau = 2e-6, dt = 1.2e-6;
    CHECK(dephasing_prediction(0.0, tau, dt) == doctest::Approx(1.0).epsilon(1e-12));
    // Strong dephasing leaves the fully mixed 1/3.
    CHECK(dephasing_prediction(khz_to_rad(1e6), tau, dt) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    const double g = khz_to_rad(2.0);
    CHECK(dephasing_prediction(g, tau, dt) ==
          doctest::Approx(1.0 / 3.0 +
                          (2.0 / 3.0) * std::exp(-3.0 * g * tau * tau / (16.0 * dt)))
              .epsilon(1e-12));
    CHECK_THROWS_AS(dephasing_prediction(g, tau, 0.0), std::domain_error);
    CHECK_THROWS_AS(dephasing_prediction(g, tau, -1e-6), std::domain_error);
}

TEST_CASE("adiabaticity report for a detuned stage") {
    PulseSchedule s;
    s.tau = 2e-6;
    s.delta_t = PulseSchedule::delta_t_from_eta(0.85, s.tau);
    s.pump_peak_rabi = mhz_to_rad(100.0);
    s.stokes_peak_rabi = mhz_to_rad(100.0);
    s.pump_detuning = mhz_to_rad(600.0);

    const AdiabaticityReport rep = adiabaticity_report(s, 5.0);
    CHECK(rep.lambda_p == doctest::Approx(9.256006121163265).epsilon(1e-12));
    CHECK(rep.eta == doctest::Approx(0.85).epsilon(1e-12));
    CHECK(rep.r == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(rep.theta_max.has_value());
    REQUIRE(rep.a_max.has_value());
    CHECK(rep.margin == doctest::Approx(rep.lambda_p / *rep.a_max).epsilon(1e-12));
    CHECK(rep.satisfied == (rep.margin >= 5.0));
    // eta = 0.85, r = 1: A_max = A(0) = 0.85 e^{0.7225}/4 = 0.437; margin ~ 21.
    CHECK(rep.satisfied);

    PulseSchedule resonant = s;
    resonant.pump_detuning = 0.0;
    CHECK_THROWS_AS(adiabaticity_report(resonant), std::domain_error);
}

TEST_CASE("eigentrack follows an avoided crossing") {
    const double g = 0.5;
    auto h = [&](double t) {
        Eigen::MatrixXcd m(2, 2);
        m << t, g, g, -t;
        return m;
    };
    std::vector<double> times;
    for (int i = 0; i <= 200; ++i) times.push_back(-5.0 + 10.0 * i / 200.0);

    const EigenTrackResult res = general_eigentrack(h, times);
    REQUIRE(res.times.size() == times.size());
    REQUIRE(res.eigenvalues.size() == times.size());
    REQUIRE(res.branch_labels.size() == 2);
    CHECK(res.min_overlap > 0.9);

    // Branch 0 starts lowest and stays the analytic lower branch throughout
    // (the gap 2g never closes).
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = res.times[k];
        const double root = std::sqrt(t * t + g * g);
        CHECK(res.eigenvalues[k][0] == doctest::Approx(-root).epsilon(1e-10));
        CHECK(res.eigenvalues[k][1] == doctest::Approx(root).epsilon(1e-10));
    }

    CHECK_THROWS_AS(general_eigentrack(h, std::vector<double>{0.0}), ConfigError);
}

TEST_CASE("numerical eta optimum, coarse smoke grid") {
    OptimalEtaOptions o;
    o.eta_min = 0.6;
    o.eta_max = 1.4;
    o.eta_step = 0.2;
    o.theta_end = 2.0;
    o.rtol = 1e-7;
    o.atol = 1e-10;
    const OptimalEtaResult res = optimal_eta(10.0, 1.0, o);
    CHECK(res.eta_opt >= 0.6);
    CHECK(res.eta_opt <= 1.4);
    CHECK(res.efficiency > 0.99);
    CHECK(res.grid.size() >= 5);
    for (const auto& [eta, p3] : res.grid) {
        CHECK(p3 >= 0.0);
        CHECK(p3 <= 1.0 + 1e-9);
    }
}

} // TEST_SUITE
