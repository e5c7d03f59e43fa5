#include "stairwheel/taguchi.hpp"

#include <cmath>
#include <set>

#include "stairwheel/errors.hpp"

namespace stairwheel {

Factor::Factor(std::string name_, std::vector<double> levels_, FactorRole role_)
    : name(std::move(name_)), levels(std::move(levels_)), role(role_) {
    if (name.empty()) throw ValidationError("Factor: name must not be empty");
    if (levels.size() < 2 || levels.size() > 3)
        throw ValidationError("Factor '" + name + "': need 2 or 3 levels for array placement, got " +
                              std::to_string(levels.size()));
    std::set<double> distinct(levels.begin(), levels.end());
    if (distinct.size() != levels.size())
        throw ValidationError("Factor '" + name + "': level values must be distinct");
}

void ResponseMatrix::validate() const {
    if (rows.empty()) throw ValidationError("ResponseMatrix: no runs");
    const size_t n = rows[0].size();
    if (n < 1) throw ValidationError("ResponseMatrix: need at least one replicate per run");
    for (size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != n)
            throw ShapeMismatch("ResponseMatrix: run " + std::to_string(r + 1) + " has " +
                                std::to_string(rows[r].size()) + " replicates, expected " +
                                std::to_string(n));
        for (double v : rows[r]) {
            if (!std::isfinite(v))
                throw ValidationError("ResponseMatrix: non-finite value in run " + std::to_string(r + 1));
            if (v <= 0.0)
                throw NonPositiveResponse("ResponseMatrix: non-positive power value in run " +
                                          std::to_string(r + 1));
        }
    }
}

ExperimentPlan build_l9(const std::vector<Factor>& factors) {
    if (factors.size() != 3)
        throw ArityError("build_l9 arity: expected exactly 3 control factors, got " +
                         std::to_string(factors.size()));
    for (const Factor& f : factors) {
        if (f.levels.size() != 3)
            throw ArityError("build_l9 arity: factor '" + f.name + "' has " +
                             std::to_string(f.levels.size()) + " levels, L9 requires 3");
        if (f.role != FactorRole::Control)
            throw ArityError("build_l9 arity: factor '" + f.name + "' is not a control factor");
    }
    ExperimentPlan plan;
    plan.factors = factors;
    plan.runs = {{{1, 1, 1},
                  {1, 2, 2},
                  {1, 3, 3},
                  {2, 1, 2},
                  {2, 2, 3},
                  {2, 3, 1},
                  {3, 1, 3},
                  {3, 2, 1},
                  {3, 3, 2}}};
    return plan;
}

double snr_smaller_better(std::span<const double> replicates) {
    if (replicates.empty()) throw ValidationError("snr_smaller_better: empty replicate list");
    double sum_sq = 0.0;
    for (double x : replicates) {
        if (!(x > 0.0) || !std::isfinite(x))
            throw NonPositiveResponse("snr_smaller_better: replicates must be positive and finite");
        sum_sq += x * x;
    }
    return -10.0 * std::log10(sum_sq / static_cast<double>(replicates.size()));
}

std::vector<double> snr_column(const ExperimentPlan& plan, const ResponseMatrix& responses) {
    if (responses.run_count() != plan.run_count())
        throw ShapeMismatch("snr_column: " + std::to_string(responses.run_count()) +
                            " response rows for " + std::to_string(plan.run_count()) + " plan runs");
    std::vector<double> out;
    out.reserve(responses.rows.size());
    for (const auto& row : responses.rows) out.push_back(snr_smaller_better(row));
    return out;
}

}  // namespace stairwheel
