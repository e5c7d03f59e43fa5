#pragma once

#include <span>
#include <string>
#include <vector>

#include "stairwheel/gra.hpp"
#include "stairwheel/taguchi.hpp"

namespace stairwheel {

struct AnovaFactorRow {
    std::string name;
    double sum_squares = 0.0;
    int dof = 2;  // levels - 1
    double mean_square = 0.0;
    double f_value = 0.0;
    double contribution_pct = 0.0;
};

struct AnovaTable {
    std::vector<AnovaFactorRow> factors;
    double error_ss = 0.0;
    int error_dof = 2;
    double error_ms = 0.0;
    double error_contribution_pct = 0.0;
    double total_ss = 0.0;
    int total_dof = 8;
    bool zero_total = false;             // constant grades: contributions reported as 0
    bool negative_error_clamped = false; // tiny negative error SS clamped to 0
};

// Decomposes grade variation over the L9 factors:
//   SS_f   = 3 * sum over levels (level mean - grand mean)^2
//   SS_tot = sum (grade - grand mean)^2,  SS_err = SS_tot - sum SS_f
//   F_f    = (SS_f / 2) / (SS_err / 2)
// Error SS below -1e-9 raises; within [-1e-9, 0) it is clamped and flagged.
AnovaTable anova_from_grades(const ExperimentPlan& plan, std::span<const double> grade_vector);

// Factors whose F statistic reaches the critical threshold.
std::vector<std::string> significant_factors(const AnovaTable& table, double f_critical);

struct Prediction {
    double predicted_grade = 0.0;                 // gamma_p
    double grand_mean = 0.0;                      // gamma_m
    std::vector<std::string> significant;
    std::vector<double> best_level_average;       // gamma_i per significant factor
    std::vector<int> optimal_level;               // matching 1-based levels
};

// Additive estimate at the optimal setting:
//   gamma_p = gamma_m + sum over significant factors (gamma_i - gamma_m)
// where gamma_i is the factor's best level average.
Prediction predict_grade(const InfluenceTable& influence_table,
                         const std::vector<std::string>& significant);

struct Confirmation {
    double predicted = 0.0;
    double observed = 0.0;
    double abs_gap = 0.0;
    double rel_gap = 0.0;  // relative to the predicted grade
};

Confirmation confirm(const Prediction& prediction, double confirmation_grade);

}  // namespace stairwheel
