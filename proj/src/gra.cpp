#include "stairwheel/gra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stairwheel/errors.hpp"

namespace stairwheel {

void AttributeTable::validate() const {
    if (values.empty() || names.empty()) throw ValidationError("AttributeTable: empty");
    for (size_t r = 0; r < values.size(); ++r) {
        if (values[r].size() != names.size())
            throw ShapeMismatch("AttributeTable: run " + std::to_string(r + 1) + " has " +
                                std::to_string(values[r].size()) + " values for " +
                                std::to_string(names.size()) + " attributes");
        for (double v : values[r])
            if (!std::isfinite(v))
                throw ValidationError("AttributeTable: non-finite value in run " + std::to_string(r + 1));
    }
}

NormalizedMatrix normalize(const AttributeTable& table, std::span<const AttributeSpec> specs) {
    table.validate();
    if (specs.size() != static_cast<size_t>(table.attribute_count()))
        throw ShapeMismatch("normalize: " + std::to_string(specs.size()) + " specs for " +
                            std::to_string(table.attribute_count()) + " attributes");

    const int runs = table.run_count(), attrs = table.attribute_count();
    NormalizedMatrix out;
    out.values.assign(runs, std::vector<double>(attrs, 0.0));
    out.degenerate.assign(attrs, false);

    for (int a = 0; a < attrs; ++a) {
        double lo = table.values[0][a], hi = table.values[0][a];
        for (int r = 1; r < runs; ++r) {
            lo = std::min(lo, table.values[r][a]);
            hi = std::max(hi, table.values[r][a]);
        }
        if (hi == lo) {
            // Every run already sits at the ideal; flag it for the caller.
            out.degenerate[a] = true;
            for (int r = 0; r < runs; ++r) out.values[r][a] = 1.0;
            continue;
        }
        const double range = hi - lo;
        for (int r = 0; r < runs; ++r) {
            const double x = table.values[r][a];
            out.values[r][a] = specs[a].direction == Direction::LargerIsBetter ? (x - lo) / range
                                                                               : (hi - x) / range;
        }
    }
    return out;
}

std::vector<std::vector<double>> grey_coefficients(const NormalizedMatrix& normalized, double zeta) {
    if (!(zeta > 0.0)) throw ValidationError("grey_coefficients: zeta must be positive");
    std::vector<std::vector<double>> grc(normalized.values.size());
    for (size_t r = 0; r < normalized.values.size(); ++r) {
        grc[r].reserve(normalized.values[r].size());
        for (double v : normalized.values[r]) {
            if (v < -1e-12 || v > 1.0 + 1e-12)
                throw ValidationError("grey_coefficients: normalized value outside [0, 1]");
            const double deviation = 1.0 - v;
            grc[r].push_back(zeta / (deviation + zeta));
        }
    }
    return grc;
}

GradeRanking grades(const std::vector<std::vector<double>>& grc, std::span<const double> weights) {
    if (grc.empty()) throw ValidationError("grades: empty coefficient matrix");
    const size_t attrs = grc[0].size();
    if (weights.size() != attrs)
        throw WeightError("grades: " + std::to_string(weights.size()) + " weights for " +
                          std::to_string(attrs) + " attributes");
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0 || !std::isfinite(w)) throw WeightError("grades: weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw WeightError("grades: weights must sum to 1, got " + std::to_string(sum));

    GradeRanking out;
    out.grades.reserve(grc.size());
    for (const auto& row : grc) {
        if (row.size() != attrs) throw ShapeMismatch("grades: ragged coefficient matrix");
        double g = 0.0;
        for (size_t a = 0; a < attrs; ++a) g += weights[a] * row[a];
        out.grades.push_back(g);
    }

    std::vector<int> order(out.grades.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return out.grades[a] > out.grades[b]; });
    out.ranks.assign(out.grades.size(), 0);
    for (size_t i = 0; i < order.size(); ++i) out.ranks[order[i]] = static_cast<int>(i) + 1;
    return out;
}

InfluenceTable influence(const ExperimentPlan& plan, std::span<const double> grade_vector) {
    if (grade_vector.size() != static_cast<size_t>(plan.run_count()))
        throw ShapeMismatch("influence: " + std::to_string(grade_vector.size()) + " grades for " +
                            std::to_string(plan.run_count()) + " runs");

    InfluenceTable out;
    const int factors = static_cast<int>(plan.factors.size());
    for (int f = 0; f < factors; ++f) {
        out.factor_names.push_back(plan.factors[f].name);
        std::array<double, 3> avg{};
        std::array<int, 3> count{};
        for (int r = 0; r < plan.run_count(); ++r) {
            const int lvl = plan.runs[r][f] - 1;
            avg[lvl] += grade_vector[r];
            count[lvl] += 1;
        }
        for (int l = 0; l < 3; ++l) {
            if (count[l] == 0) throw ShapeMismatch("influence: level with no runs");
            avg[l] /= count[l];
        }
        out.level_averages.push_back(avg);
        int best = 0;
        for (int l = 1; l < 3; ++l)
            if (avg[l] > avg[best]) best = l;
        out.optimal_level.push_back(best + 1);
    }
    double total = 0.0;
    for (double g : grade_vector) total += g;
    out.grand_mean = total / static_cast<double>(grade_vector.size());
    return out;
}

}  // namespace stairwheel
