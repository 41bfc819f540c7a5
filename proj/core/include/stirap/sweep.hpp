#pragma once

// Parameter scans over scenarios. Scans are deterministic: each row is
// computed from its index alone, so the worker count never changes results,
// and a failing row is recorded instead of aborting the scan.

#include <string>
#include <vector>

#include "stirap/scenario.hpp"

namespace stirap {

std::vector<double> linspace(double min, double max, int count);

// One integration of the scenario exactly as configured.
struct SingleResult {
    double observable;
    std::size_t steps;  // accepted integrator steps
};
SingleResult evaluate_scenario(const Scenario& sc);

struct SweepRow {
    double value;
    double observable;  // NaN when failed
    bool failed;
    std::string error;
    std::size_t steps;
    double wall_seconds;
};

std::vector<SweepRow> run_sweep(const Scenario& base,
                                const std::vector<double>& values,
                                int jobs = 1);

struct TauOptResult {
    double omega_mhz;
    double linewidth_khz;
    double tau_opt_us;
    double efficiency;  // at the reported width
};

// Optimal pulse width per (Rabi frequency, linewidth) pair of the scenario's
// sweep lists. A finite linewidth gives an interior optimum (located by a
// grid and golden-section refinement); with perfectly coherent lasers the
// efficiency grows monotonically and the smallest width reaching 0.995 is
// reported instead. The pulse separation stays at the scenario's eta and the
// integration window scales with the width.
std::vector<TauOptResult> tau_opt_scan(const Scenario& base, int jobs = 1);

} // namespace stirap
