#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>

#include "stirap/errors.hpp"

// Embedded Dormand-Prince 5(4) integrator with proportional step control.
// State is any Eigen-like dense array of complex or real scalars supporting
// elementwise arithmetic; the right-hand side writes into a preallocated
// output (rhs(t, y, dydt)).

namespace stirap {

struct OdeOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0;  // 0 = choose automatically
    std::size_t max_steps = 400'000'000;
};

struct OdeStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evaluations = 0;
};

template <class State>
class DormandPrince5 {
public:
    explicit DormandPrince5(const State& prototype)
        : k1_(prototype), k2_(prototype), k3_(prototype), k4_(prototype),
          k5_(prototype), k6_(prototype), k7_(prototype), ytmp_(prototype),
          ynew_(prototype) {}

    // Integrates y from t0 to t1. sample_times must be sorted ascending and
    // lie in [t0, t1]; observer(t, y) fires at each of them. The state is
    // left at t1 regardless of sampling.
    template <class Rhs, class Observer>
    OdeStats integrate(Rhs&& rhs, State& y, double t0, double t1,
                       const OdeOptions& opt, std::span<const double> sample_times,
                       Observer&& observer) {
        OdeStats stats;
        opt_rtol_ = opt.rtol;
        opt_atol_ = opt.atol;
        const double span_t = t1 - t0;
        if (span_t <= 0.0) {
            for (double ts : sample_times) observer(ts, y);
            return stats;
        }

        double t = t0;
        std::size_t next_sample = 0;
        while (next_sample < sample_times.size() && sample_times[next_sample] <= t0) {
            observer(sample_times[next_sample], y);
            ++next_sample;
        }

        rhs(t, y, k1_);
        ++stats.rhs_evaluations;

        double h = opt.initial_step;
        if (h <= 0.0) {
            const double d0 = scaled_norm(y, y, opt);
            const double d1 = scaled_norm(k1_, y, opt);
            h = (d1 > 0.0) ? 0.01 * d0 / d1 : 1e-6 * span_t;
            if (!(h > 0.0)) h = 1e-6 * span_t;
        }
        h = std::min({h, opt.max_step, span_t});

        bool last_rejected = false;
        while (t < t1) {
            if (stats.accepted + stats.rejected >= opt.max_steps) {
                throw NumericalError(
                    "integration exceeded the step budget at t = " + std::to_string(t) +
                        " s (tolerance failure)",
                    t);
            }
            const double h_min = 16.0 * std::numeric_limits<double>::epsilon() *
                                 std::max(std::abs(t), span_t);
            if (h < h_min) {
                throw NumericalError(
                    "step size underflow at t = " + std::to_string(t) + " s", t);
            }

            // Clip the proposed step to the next sample time or the end of
            // the span. Clipped steps land exactly on their target and do
            // not feed back into step-size control: the clipped step can be
            // arbitrarily short (down to one ulp of t) and would otherwise
            // collapse the controller's step size.
            double target = t + h;
            bool clipped = false;
            bool hit_sample = false;
            if (target >= t1) {
                target = t1;
                clipped = true;
            }
            if (next_sample < sample_times.size() &&
                target >= sample_times[next_sample]) {
                target = sample_times[next_sample];
                hit_sample = true;
                clipped = true;
                if (target <= t) {
                    observer(target, y);
                    ++next_sample;
                    continue;
                }
            }
            const double h_step = target - t;

            const double err = attempt_step(rhs, t, y, h_step);
            stats.rhs_evaluations += 6;

            if (err <= 1.0) {
                t = clipped ? target : t + h_step;
                y = ynew_;
                k1_ = k7_;  // first-same-as-last
                ++stats.accepted;
                if (hit_sample) {
                    observer(t, y);
                    ++next_sample;
                }
                double factor = (err > 0.0) ? safety_ * std::pow(err, -0.2) : max_growth_;
                if (last_rejected) factor = std::min(factor, 1.0);
                factor = std::clamp(factor, min_shrink_, max_growth_);
                double proposal = h_step * factor;
                if (clipped) proposal = std::max(proposal, h);
                h = std::min(proposal, opt.max_step);
                last_rejected = false;
            } else {
                ++stats.rejected;
                const double factor =
                    std::clamp(safety_ * std::pow(err, -0.2), min_shrink_, 1.0);
                h = h_step * factor;
                last_rejected = true;
            }
        }
        while (next_sample < sample_times.size()) {
            observer(sample_times[next_sample], y);
            ++next_sample;
        }
        return stats;
    }

private:
    template <class Rhs>
    double attempt_step(Rhs&& rhs, double t, const State& y, double h) {
        constexpr double a21 = 1.0 / 5;
        constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                         a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                         a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                         a65 = -5103.0 / 18656;
        constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                         b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                         e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
        constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

        ytmp_ = y + h * (a21 * k1_);
        rhs(t + c2 * h, ytmp_, k2_);
        ytmp_ = y + h * (a31 * k1_ + a32 * k2_);
        rhs(t + c3 * h, ytmp_, k3_);
        ytmp_ = y + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
        rhs(t + c4 * h, ytmp_, k4_);
        ytmp_ = y + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
        rhs(t + c5 * h, ytmp_, k5_);
        ytmp_ = y + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
        rhs(t + h, ytmp_, k6_);
        ynew_ = y + h * (b1 * k1_ + b3 * k3_ + b4 * k4_ + b5 * k5_ + b6 * k6_);
        rhs(t + h, ynew_, k7_);

        ytmp_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
        return error_norm(ytmp_, y, ynew_);
    }

    double error_norm(const State& err, const State& y0, const State& y1) const {
        double worst = 0.0;
        const auto* e = err.data();
        const auto* a = y0.data();
        const auto* b = y1.data();
        for (std::ptrdiff_t i = 0; i < err.size(); ++i) {
            const double scale =
                opt_atol_ + opt_rtol_ * std::max(std::abs(a[i]), std::abs(b[i]));
            const double ratio = std::abs(e[i]) / scale;
            if (std::isnan(ratio)) {
                return std::numeric_limits<double>::infinity();
            }
            worst = std::max(worst, ratio);
        }
        return worst;
    }

    template <class V>
    double scaled_norm(const V& v, const State& y, const OdeOptions& opt) const {
        double worst = 0.0;
        const auto* p = v.data();
        const auto* a = y.data();
        for (std::ptrdiff_t i = 0; i < v.size(); ++i) {
            const double scale = opt.atol + opt.rtol * std::abs(a[i]);
            worst = std::max(worst, std::abs(p[i]) / scale);
        }
        return worst;
    }

    static constexpr double safety_ = 0.9;
    static constexpr double min_shrink_ = 0.2;
    static constexpr double max_growth_ = 5.0;

    State k1_, k2_, k3_, k4_, k5_, k6_, k7_, ytmp_, ynew_;
    double opt_rtol_ = 1e-9;
    double opt_atol_ = 1e-12;
};

} // namespace stirap
