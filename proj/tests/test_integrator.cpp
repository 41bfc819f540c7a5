#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "stirap/errors.hpp"
#include "stirap/ode.hpp"
#include "stirap/units.hpp"

using namespace stirap;

namespace {

// y' = -y, y(0) = 1  ->  y(t) = e^{-t}
void decay_rhs(double, const Eigen::VectorXd& y, Eigen::VectorXd& dydt) {
    dydt = -y;
}

// Harmonic oscillator y = (q, p), q' = p, p' = -w^2 q.
struct Oscillator {
    double omega;
    void operator()(double, const Eigen::VectorXd& y, Eigen::VectorXd& dydt) const {
        dydt[0] = y[1];
        dydt[1] = -omega * omega * y[0];
    }
};

} // namespace

TEST_SUITE("integrator") {

TEST_CASE("exponential decay reaches e^-1") {
    Eigen::VectorXd y(1);
    y[0] = 1.0;
    DormandPrince5<Eigen::VectorXd> stepper(y);
    OdeOptions opt;
    auto stats = stepper.integrate(decay_rhs, y, 0.0, 1.0, opt, {}, [](double, const Eigen::VectorXd&) {});
    CHECK(y[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-8));
    CHECK(stats.accepted > 0);
    CHECK(stats.rhs_evaluations == 1 + 6 * (stats.accepted + stats.rejected));
}

TEST_CASE("harmonic oscillator stays on the closed form over many periods") {
    const double omega = 3.0;
    Oscillator osc{omega};
    Eigen::VectorXd y(2);
    y[0] = 1.0;
    y[1] = 0.0;
    DormandPrince5<Eigen::VectorXd> stepper(y);
    OdeOptions opt;
    opt.rtol = 1e-10;
    opt.atol = 1e-12;
    const double t1 = 10.3 * units::two_pi / omega;
    stepper.integrate(osc, y, 0.0, t1, opt, {}, [](double, const Eigen::VectorXd&) {});
    CHECK(y[0] == doctest::Approx(std::cos(omega * t1)).epsilon(1e-7));
    CHECK(y[1] == doctest::Approx(-omega * std::sin(omega * t1)).epsilon(1e-7));
    const double energy = 0.5 * y[1] * y[1] + 0.5 * omega * omega * y[0] * y[0];
    CHECK(energy == doctest::Approx(0.5 * omega * omega).epsilon(1e-8));
}

TEST_CASE("dense sampling: exact times, ascending, matches the closed form") {
    // A dense grid forces many clipped steps; the solution quality must not
    // degrade and every requested time must be delivered exactly once.
    const double omega = 2.0;
    Oscillator osc{omega};
    Eigen::VectorXd y(2);
    y[0] = 1.0;
    y[1] = 0.0;
    DormandPrince5<Eigen::VectorXd> stepper(y);
    OdeOptions opt;

    const int n = 501;
    const double t1 = 12.0;
    std::vector<double> samples(n);
    for (int i = 0; i < n; ++i) samples[i] = t1 * i / (n - 1);

    std::vector<double> seen_t;
    double worst = 0.0;
    stepper.integrate(osc, y, 0.0, t1, opt, samples,
                      [&](double t, const Eigen::VectorXd& s) {
                          seen_t.push_back(t);
                          worst = std::max(worst, std::abs(s[0] - std::cos(omega * t)));
                      });
    REQUIRE(seen_t.size() == samples.size());
    for (int i = 0; i < n; ++i) CHECK(seen_t[i] == samples[i]);
    CHECK(worst < 1e-7);
    CHECK(y[0] == doctest::Approx(std::cos(omega * t1)).epsilon(1e-7));
}

TEST_CASE("sample density does not change the endpoint") {
    const double omega = 5.0;
    Oscillator osc{omega};
    OdeOptions opt;
    auto endpoint = [&](int n_samples) {
        Eigen::VectorXd y(2);
        y[0] = 0.3;
        y[1] = -1.1;
        DormandPrince5<Eigen::VectorXd> stepper(y);
        std::vector<double> samples(n_samples);
        for (int i = 0; i < n_samples; ++i) samples[i] = 4.0 * (i + 1) / n_samples;
        stepper.integrate(osc, y, 0.0, 4.0, opt, samples,
                          [](double, const Eigen::VectorXd&) {});
        return y;
    };
    const Eigen::VectorXd coarse = endpoint(2);
    const Eigen::VectorXd dense = endpoint(1000);
    CHECK(std::abs(coarse[0] - dense[0]) < 1e-7);
    CHECK(std::abs(coarse[1] - dense[1]) < 1e-7);
}

TEST_CASE("max_step is honored") {
    Eigen::VectorXd y(1);
    y[0] = 1.0;
    DormandPrince5<Eigen::VectorXd> stepper(y);
    OdeOptions opt;
    opt.max_step = 0.01;
    auto stats = stepper.integrate(decay_rhs, y, 0.0, 1.0, opt, {},
                                   [](double, const Eigen::VectorXd&) {});
    CHECK(stats.accepted >= 100);
}

TEST_CASE("samples at or before t0 are emitted before integration") {
    Eigen::VectorXd y(1);
    y[0] = 2.0;
    DormandPrince5<Eigen::VectorXd> stepper(y);
    OdeOptions opt;
    std::vector<double> samples{-1.0, 0.0, 0.5};
    std::vector<std::pair<double, double>> seen;
    stepper.integrate(decay_rhs, y, 0.0, 1.0, opt, samples,
                      [&](double t, const Eigen::VectorXd& s) {
                          seen.emplace_back(t, s[0]);
                      });
    REQUIRE(seen.size() == 3);
    // The first two fire with the initial state untouched.
    CHECK(seen[0].first == -1.0);
    CHECK(seen[0].second == 2.0);
    CHECK(seen[1].first == 0.0);
    CHECK(seen[1].second == 2.0);
    CHECK(seen[2].second == doctest::Approx(2.0 * std::exp(-0.5)).epsilon(1e-8));
}

TEST_CASE("empty span fires every observer immediately") {
    Eigen::VectorXd y(1);
    y[0] = 7.0;
    DormandPrince5<Eigen::VectorXd> stepper(y);
    OdeOptions opt;
    std::vector<double> samples{1.0, 2.0, 3.0};
    int fired = 0;
    auto stats = stepper.integrate(decay_rhs, y, 3.0, 3.0, opt, samples,
                                   [&](double, const Eigen::VectorXd& s) {
                                       ++fired;
                                       CHECK(s[0] == 7.0);
                                   });
    CHECK(fired == 3);
    CHECK(stats.accepted == 0);
    CHECK(stats.rhs_evaluations == 0);
    CHECK(y[0] == 7.0);
}

TEST_CASE("NaN right-hand side collapses the step and reports the time") {
    // RHS turns non-finite past t = 0.5: every trial step spanning that
    // point is rejected, the controller shrinks h to the underflow floor.
    auto rhs = [](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt) {
        dydt = -y;
        if (t > 0.5) dydt[0] = std::numeric_limits<double>::quiet_NaN();
    };
    Eigen::VectorXd y(1);
    y[0] = 1.0;
    DormandPrince5<Eigen::VectorXd> stepper(y);
    OdeOptions opt;
    bool thrown = false;
    try {
        stepper.integrate(rhs, y, 0.0, 1.0, opt, {},
                          [](double, const Eigen::VectorXd&) {});
    } catch (const NumericalError& e) {
        thrown = true;
        CHECK(e.time_reached >= 0.0);
        CHECK(e.time_reached <= 0.5 + 1e-9);
    }
    CHECK(thrown);
}

TEST_CASE("step budget exhaustion throws NumericalError") {
    Oscillator osc{50.0};
    Eigen::VectorXd y(2);
    y[0] = 1.0;
    y[1] = 0.0;
    DormandPrince5<Eigen::VectorXd> stepper(y);
    OdeOptions opt;
    opt.max_steps = 10;
    CHECK_THROWS_AS(stepper.integrate(osc, y, 0.0, 100.0, opt, {},
                                      [](double, const Eigen::VectorXd&) {}),
                    NumericalError);
}

TEST_CASE("complex state integrates a phase rotation") {
    // y' = i w y  ->  |y| conserved, arg advances linearly.
    const double w = 4.0;
    auto rhs = [&](double, const Eigen::VectorXcd& y, Eigen::VectorXcd& dydt) {
        dydt = std::complex<double>(0.0, w) * y;
    };
    Eigen::VectorXcd y(1);
    y[0] = {1.0, 0.0};
    DormandPrince5<Eigen::VectorXcd> stepper(y);
    OdeOptions opt;
    opt.rtol = 1e-10;
    stepper.integrate(rhs, y, 0.0, 2.0, opt, {},
                      [](double, const Eigen::VectorXcd&) {});
    CHECK(std::abs(y[0]) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::arg(y[0]) == doctest::Approx(std::remainder(2.0 * w, units::two_pi)).epsilon(1e-8));
}

} // TEST_SUITE
