#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "stairwheel/taguchi.hpp"

namespace stairwheel {

enum class Direction { LargerIsBetter, SmallerIsBetter };

struct AttributeSpec {
    std::string name;
    Direction direction = Direction::SmallerIsBetter;
    std::string source;  // which column feeds it: an S/N column or a raw metric
};

// Rectangular per-run attribute values (runs x attributes).
struct AttributeTable {
    std::vector<std::string> names;
    std::vector<std::vector<double>> values;

    int run_count() const { return static_cast<int>(values.size()); }
    int attribute_count() const { return static_cast<int>(names.size()); }
    void validate() const;
};

// Min-max normalization with direction handling. A column with max == min is
// degenerate: every run is flagged and mapped to the ideal 1.0.
struct NormalizedMatrix {
    std::vector<std::vector<double>> values;   // in [0, 1]
    std::vector<bool> degenerate;              // per attribute column
};

NormalizedMatrix normalize(const AttributeTable& table, std::span<const AttributeSpec> specs);

// Grey relational coefficients from deviations d = 1 - normalized:
//   grc = (d_min + zeta * d_max) / (d + zeta * d_max), d_min = 0, d_max = 1.
std::vector<std::vector<double>> grey_coefficients(const NormalizedMatrix& normalized, double zeta);

struct GradeRanking {
    std::vector<double> grades;  // weighted mean of each run's coefficients
    std::vector<int> ranks;      // 1 = best; ties broken by run index
};

GradeRanking grades(const std::vector<std::vector<double>>& grc, std::span<const double> weights);

// Average grade per control-factor level, the starred optimal level per
// factor and the overall mean grade.
struct InfluenceTable {
    std::vector<std::string> factor_names;
    std::vector<std::array<double, 3>> level_averages;  // per factor
    std::vector<int> optimal_level;                     // 1-based argmax, ties to the lowest
    double grand_mean = 0.0;
};

InfluenceTable influence(const ExperimentPlan& plan, std::span<const double> grade_vector);

}  // namespace stairwheel
