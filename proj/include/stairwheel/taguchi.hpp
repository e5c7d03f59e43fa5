#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace stairwheel {

enum class FactorRole { Control, Noise };

struct Factor {
    std::string name;
    std::vector<double> levels;  // ordered physical values
    FactorRole role = FactorRole::Control;

    Factor(std::string name, std::vector<double> levels, FactorRole role);
};

// Nine-run orthogonal array for three three-level factors. Level indices are
// 1-based; every level of every factor appears exactly three times and every
// ordered level pair of two factors appears exactly once.
struct ExperimentPlan {
    std::vector<Factor> factors;                // exactly 3 for L9
    std::vector<std::array<int, 3>> runs;       // per run: level index per factor
    std::string array_id = "L9";

    int run_count() const { return static_cast<int>(runs.size()); }
    double level_value(int run, int factor) const {
        return factors[factor].levels[runs[run][factor] - 1];
    }
};

// Per run: one replicate observation per noise level.
struct ResponseMatrix {
    std::vector<std::vector<double>> rows;

    int run_count() const { return static_cast<int>(rows.size()); }
    int replicate_count() const { return rows.empty() ? 0 : static_cast<int>(rows[0].size()); }
    void validate() const;  // rectangular, finite, positive
};

// The standard L9(3^3) assignment. Throws ArityError unless given exactly
// three control factors with exactly three levels each.
ExperimentPlan build_l9(const std::vector<Factor>& factors);

// Smaller-the-better signal-to-noise ratio, dB:
//   eta = -10 * log10( (1/n) * sum(x_i^2) )
// Throws NonPositiveResponse for any replicate <= 0.
double snr_smaller_better(std::span<const double> replicates);

// Per-run S/N ratios; rows must align with the plan.
std::vector<double> snr_column(const ExperimentPlan& plan, const ResponseMatrix& responses);

}  // namespace stairwheel
