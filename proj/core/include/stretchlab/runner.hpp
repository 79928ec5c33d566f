#ifndef STRETCHLAB_RUNNER_HPP
#define STRETCHLAB_RUNNER_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "stretchlab/scenario.hpp"

namespace stretchlab {

struct RunResult {
    std::vector<std::string> files;  // everything written, summary last
    std::string summary_path;
};

/// Execute a scenario and write its artifacts (CSV data, JSON summary, and SVG
/// plots for the geometric experiments) into out_dir. Outputs embed the full
/// canonical config and seed, so any summary can be replayed byte-exactly.
RunResult run_scenario(const Scenario& s, const std::string& out_dir);

/// Named ensemble metrics: "stretch_supremum", "line_arc_length",
/// "weak_residual". The returned callable maps a replicate seed to the metric
/// value under the scenario's parameters. Throws ValidationError for
/// unregistered names.
std::function<double(std::uint64_t)> ensemble_metric(const std::string& name,
                                                     const Scenario& s);

}  // namespace stretchlab

#endif
