#pragma once

#include <string>
#include <vector>

#include "stirap/scenario.hpp"
#include "stirap/svg_plot.hpp"
#include "stirap/table.hpp"

namespace stirap {

// Result of executing a scenario: a table of numbers, a one-line summary for
// the terminal, and (for kinds with a natural x/y view) plot series.
struct RunOutput {
    Table table;
    std::string summary;
    std::vector<PlotSeries> plot;
    PlotOptions plot_options;
};

RunOutput run_scenario(const Scenario& sc, int jobs = 1);

} // namespace stirap
