#ifndef STRETCHLAB_SCENARIO_HPP
#define STRETCHLAB_SCENARIO_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stretchlab/geometry.hpp"

namespace stretchlab {

enum class Experiment {
    trajectories,
    line,
    blowup_scan,
    reconstruct,
    weakcheck,
    ensemble,
};

std::string to_string(Experiment e);

/// One fully validated experiment configuration. Parsed from a flat key=value
/// file ('#' starts a comment); every scenario fits in a handful of keys and
/// the format needs no parser dependency in any language.
struct Scenario {
    // field
    std::string field = "holder";
    double alpha = 0.5;
    double gamma = 1.0;
    std::string initial_field = "constant_ex";

    // dynamics
    double sigma = 0.0;
    double T = 1.0;
    double dt = 1e-4;
    std::uint64_t seed = 12345;

    Experiment experiment = Experiment::blowup_scan;

    // annulus grids (blowup_scan, reconstruct, ensemble) and trajectory starts
    double r_min = 1e-3;
    double r_max = 1e-1;
    int n_r = 9;
    int n_theta = 16;

    // line experiment
    Vec3 line_from{-1.0, 0.0, 0.0};
    Vec3 line_to{1.0, 0.0, 0.0};
    double refine_len = 0.05;
    int vertex_budget = 4000;
    std::vector<double> snapshots{0.25, 0.5, 0.75, 1.0};

    // ensemble experiment
    int replicates = 64;

    // weakcheck experiment
    Vec3 phi_center{0.5, 0.0, 0.0};
    double phi_width = 0.1;

    std::size_t n_steps() const;
    /// Canonical key=value view of every field, suitable for replay.
    std::vector<std::pair<std::string, std::string>> to_key_values() const;
};

/// Parse and validate a config file. ParseError carries the offending line,
/// ValidationError the violated constraint. Unknown keys are rejected.
Scenario parse_scenario(const std::string& path);

/// Same, from in-memory text (file name only used in messages).
Scenario parse_scenario_text(const std::string& text, const std::string& name = "<config>");

/// Apply validation to a hand-built scenario; throws ValidationError.
void validate(const Scenario& s);

}  // namespace stretchlab

#endif
