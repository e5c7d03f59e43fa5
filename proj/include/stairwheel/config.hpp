#pragma once

#include <string>
#include <vector>

#include "stairwheel/design_space.hpp"
#include "stairwheel/gra.hpp"
#include "stairwheel/taguchi.hpp"

namespace stairwheel {

// Fully validated pipeline configuration. Parsing is strict: unknown
// sections or keys are rejected and every violation is reported at once.
struct PipelineConfig {
    // [analysis]
    double zeta = 0.5;
    double f_critical = 10.0;
    std::vector<double> weights;  // per attribute, normalized to the attribute order below
    unsigned seed = 1;

    // [design]
    double child_radius = 10.0;  // mm
    double o_max = 31.75;        // mm
    double riser_min = 177.8;    // mm
    LmBounds lm_bounds{210.96, 352.37};
    int nc_sweep_max = 60;
    int chain_links = 2;

    // [module]
    ModuleGeometry module;

    // [factor.*] in A, B, C order: module_length, parent_radius, child_count
    std::vector<Factor> control_factors;

    // [stair.*] noise levels in declaration order
    std::vector<std::string> stair_names;
    std::vector<StairSpec> stairs;

    // [attribute.*] fixed order: power_sn, amplitude, frequency
    std::vector<AttributeSpec> attributes;

    // [output]
    std::string output_dir = "out";
    bool emit_csv = true;
    bool emit_text = true;
    bool emit_svg = true;

    const Factor& module_length_factor() const { return control_factors[0]; }
    const Factor& parent_radius_factor() const { return control_factors[1]; }
    const Factor& child_count_factor() const { return control_factors[2]; }
};

// Parses and validates a configuration file. Throws ParseError with a line
// diagnostic for malformed text and ValidationError listing every violation
// for a well-formed but invalid file.
PipelineConfig load_config(const std::string& path);

// Same, from text already in memory (diagnostics use `origin` as file name).
PipelineConfig parse_config(const std::string& text, const std::string& origin = "<string>");

}  // namespace stairwheel
