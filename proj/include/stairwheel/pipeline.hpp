#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stairwheel/anova.hpp"
#include "stairwheel/config.hpp"
#include "stairwheel/design_space.hpp"
#include "stairwheel/gra.hpp"
#include "stairwheel/taguchi.hpp"

namespace stairwheel {

// Everything one analysis produces, ready for serialization.
struct Report {
    ExperimentPlan plan;
    ResponseMatrix responses;
    std::vector<double> sn;                 // per run, dB
    AttributeTable attributes;              // power S/N, amplitude, frequency
    NormalizedMatrix normalized;
    std::vector<std::vector<double>> grc;
    GradeRanking grading;
    InfluenceTable influence_table;
    AnovaTable anova;
    std::vector<std::string> significant;
    std::optional<Prediction> prediction;   // absent when no factor is significant
    std::optional<Confirmation> confirmation;
    DesignBounds bounds;
    std::vector<std::string> warnings;

    // Physical values at the selected optimal setting, A/B/C order.
    std::vector<double> optimal_values() const;
};

// Reads a response CSV with header run,replicate_1..replicate_n; run ids must
// be exactly 1..plan.run_count() with no duplicates or gaps.
ResponseMatrix ingest_responses(const std::string& path, const ExperimentPlan& plan);

// The full chain: plan -> S/N -> attributes -> normalize -> coefficients ->
// grades -> influence -> ANOVA -> significance -> prediction, plus the
// control-factor bounds. Deterministic for fixed inputs.
Report run_analysis(const PipelineConfig& config, const ResponseMatrix& responses);

// Writes the report files into out_dir (created if needed): plan.csv,
// grey.csv, influence.csv, anova.csv, bounds.{csv,txt}, confirmation.txt,
// per-wheel profiles under wheels/, and summary.txt (always). Returns the
// paths written.
std::vector<std::string> emit_report(const Report& report, const PipelineConfig& config,
                                     const std::string& out_dir);

// Serialization helpers shared by emit_report and the CLI.
std::string plan_csv(const ExperimentPlan& plan);
std::string grey_csv(const Report& report);
std::string influence_csv(const Report& report);
std::string anova_csv(const AnovaTable& table);
std::string bounds_csv(const DesignBounds& bounds);
std::string bounds_text(const DesignBounds& bounds, double o_max, double child_radius);
std::string confirmation_text(const Report& report);
std::string summary_text(const Report& report);

// Validates that a plan CSV (as emitted by plan_csv) matches the given plan.
void check_plan_alignment(const std::string& path, const ExperimentPlan& plan);

// Command-line entry point. Exit codes: 0 success, 1 validation failure,
// 2 I/O failure, 64 usage error.
int cli(int argc, const char* const* argv);

}  // namespace stairwheel
