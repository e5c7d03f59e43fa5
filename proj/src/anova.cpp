#include "stairwheel/anova.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stairwheel/errors.hpp"

namespace stairwheel {

AnovaTable anova_from_grades(const ExperimentPlan& plan, std::span<const double> grade_vector) {
    if (grade_vector.size() != static_cast<size_t>(plan.run_count()))
        throw ShapeMismatch("anova_from_grades: " + std::to_string(grade_vector.size()) +
                            " grades for " + std::to_string(plan.run_count()) + " runs");

    const InfluenceTable infl = influence(plan, grade_vector);
    const double gm = infl.grand_mean;

    AnovaTable out;
    double factor_ss_sum = 0.0;
    for (size_t f = 0; f < infl.factor_names.size(); ++f) {
        AnovaFactorRow row;
        row.name = infl.factor_names[f];
        for (double avg : infl.level_averages[f]) row.sum_squares += 3.0 * (avg - gm) * (avg - gm);
        row.dof = 2;
        row.mean_square = row.sum_squares / row.dof;
        out.factors.push_back(row);
        factor_ss_sum += row.sum_squares;
    }

    for (double g : grade_vector) out.total_ss += (g - gm) * (g - gm);
    out.total_dof = plan.run_count() - 1;

    out.error_ss = out.total_ss - factor_ss_sum;
    if (out.error_ss < -1e-9)
        throw ValidationError("anova_from_grades: negative error sum of squares " +
                              std::to_string(out.error_ss));
    if (out.error_ss < 0.0) {
        out.error_ss = 0.0;
        out.negative_error_clamped = true;
    }
    out.error_dof = out.total_dof - 2 * static_cast<int>(out.factors.size());
    out.error_ms = out.error_dof > 0 ? out.error_ss / out.error_dof : 0.0;

    out.zero_total = out.total_ss <= 0.0;
    for (AnovaFactorRow& row : out.factors) {
        row.f_value = out.error_ms > 0.0 ? row.mean_square / out.error_ms
                                         : (row.mean_square > 0.0 ? std::numeric_limits<double>::infinity()
                                                                  : 0.0);
        row.contribution_pct = out.zero_total ? 0.0 : 100.0 * row.sum_squares / out.total_ss;
    }
    out.error_contribution_pct = out.zero_total ? 0.0 : 100.0 * out.error_ss / out.total_ss;
    return out;
}

std::vector<std::string> significant_factors(const AnovaTable& table, double f_critical) {
    std::vector<std::string> out;
    for (const AnovaFactorRow& row : table.factors)
        if (row.f_value >= f_critical) out.push_back(row.name);
    return out;
}

Prediction predict_grade(const InfluenceTable& influence_table,
                         const std::vector<std::string>& significant) {
    if (significant.empty())
        throw EmptySignificantSet("predict_grade: no statistically significant factors");

    Prediction out;
    out.grand_mean = influence_table.grand_mean;
    out.predicted_grade = influence_table.grand_mean;
    for (const std::string& name : significant) {
        const auto it = std::find(influence_table.factor_names.begin(),
                                  influence_table.factor_names.end(), name);
        if (it == influence_table.factor_names.end())
            throw ValidationError("predict_grade: unknown factor '" + name + "'");
        const size_t f = it - influence_table.factor_names.begin();
        const int best = influence_table.optimal_level[f];
        const double gamma_i = influence_table.level_averages[f][best - 1];
        out.significant.push_back(name);
        out.best_level_average.push_back(gamma_i);
        out.optimal_level.push_back(best);
        out.predicted_grade += gamma_i - influence_table.grand_mean;
    }
    return out;
}

Confirmation confirm(const Prediction& prediction, double confirmation_grade) {
    if (!std::isfinite(confirmation_grade))
        throw ValidationError("confirm: confirmation grade must be finite");
    Confirmation out;
    out.predicted = prediction.predicted_grade;
    out.observed = confirmation_grade;
    out.abs_gap = std::abs(out.observed - out.predicted);
    out.rel_gap = out.predicted != 0.0 ? out.abs_gap / std::abs(out.predicted) : 0.0;
    return out;
}

}  // namespace stairwheel
