#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "reference_data.hpp"
#include "stairwheel/errors.hpp"
#include "stairwheel/taguchi.hpp"

using namespace stairwheel;

namespace {

std::vector<Factor> paper_factors() {
    return {Factor("module_length", {240, 260, 280}, FactorRole::Control),
            Factor("parent_radius", {40, 45, 50}, FactorRole::Control),
            Factor("child_count", {16, 18, 20}, FactorRole::Control)};
}

ResponseMatrix paper_responses() {
    ResponseMatrix m;
    for (const auto& row : refdata::kPower) m.rows.push_back({row[0], row[1], row[2]});
    return m;
}

}  // namespace

TEST_CASE("L9 layout matches the standard assignment") {
    const ExperimentPlan plan = build_l9(paper_factors());
    REQUIRE(plan.run_count() == 9);
    CHECK(plan.runs[4] == std::array<int, 3>{2, 2, 3});  // run 5
    CHECK(plan.runs[0] == std::array<int, 3>{1, 1, 1});
    CHECK(plan.runs[8] == std::array<int, 3>{3, 3, 2});
    CHECK(plan.level_value(4, 0) == 260);
    CHECK(plan.level_value(4, 2) == 20);
}

TEST_CASE("L9 balance and pairwise orthogonality hold exactly") {
    const ExperimentPlan plan = build_l9(paper_factors());

    for (int f = 0; f < 3; ++f) {
        std::map<int, int> counts;
        for (const auto& run : plan.runs) counts[run[f]]++;
        for (int lvl = 1; lvl <= 3; ++lvl) CHECK(counts[lvl] == 3);
    }

    // brute-force pair enumeration: every ordered level pair exactly once
    for (int f1 = 0; f1 < 3; ++f1) {
        for (int f2 = f1 + 1; f2 < 3; ++f2) {
            std::map<std::pair<int, int>, int> combos;
            for (const auto& run : plan.runs) combos[{run[f1], run[f2]}]++;
            CHECK(combos.size() == 9);
            for (const auto& [combo, count] : combos) CHECK(count == 1);
        }
    }
}

TEST_CASE("L9 arity errors") {
    auto two = paper_factors();
    two.pop_back();
    CHECK_THROWS_AS(build_l9(two), ArityError);

    auto short_levels = paper_factors();
    short_levels[1] = Factor("parent_radius", {40, 45}, FactorRole::Control);
    CHECK_THROWS_AS(build_l9(short_levels), ArityError);

    // four levels violate the factor invariant itself
    CHECK_THROWS_AS(Factor("module_length", {240, 260, 280, 300}, FactorRole::Control),
                    ValidationError);
    CHECK_THROWS_AS(Factor("module_length", {240, 240, 280}, FactorRole::Control), ValidationError);
}

TEST_CASE("smaller-the-better S/N ratio") {
    const std::vector<double> run1 = {4.02, 4.07, 5.19};
    CHECK(snr_smaller_better(run1) == doctest::Approx(-12.985722).epsilon(1e-6));
    const std::vector<double> run5 = {2.99, 2.99, 3.08};
    CHECK(snr_smaller_better(run5) == doctest::Approx(-9.600996).epsilon(1e-6));
    const std::vector<double> unit = {1.0};
    CHECK(snr_smaller_better(unit) == doctest::Approx(0.0));

    const std::vector<double> bad = {1.0, 0.0};
    CHECK_THROWS_AS(snr_smaller_better(bad), NonPositiveResponse);
    const std::vector<double> negative = {1.0, -2.0};
    CHECK_THROWS_AS(snr_smaller_better(negative), NonPositiveResponse);
}

TEST_CASE("S/N column over the shipped power data") {
    const ExperimentPlan plan = build_l9(paper_factors());
    const auto sn = snr_column(plan, paper_responses());
    REQUIRE(sn.size() == 9);
    for (int r = 0; r < 9; ++r)
        CHECK(sn[r] == doctest::Approx(refdata::kExactSn[r]).epsilon(1e-5));

    ResponseMatrix short_rows = paper_responses();
    short_rows.rows.pop_back();
    CHECK_THROWS_AS(snr_column(plan, short_rows), ShapeMismatch);
}

TEST_CASE("S/N column is constant for constant responses") {
    const ExperimentPlan plan = build_l9(paper_factors());
    ResponseMatrix m;
    m.rows.assign(9, {2.5, 2.5, 2.5});
    const auto sn = snr_column(plan, m);
    for (double v : sn) CHECK(v == doctest::Approx(sn[0]));
}

TEST_CASE("S/N scaling identity and monotonicity") {
    std::mt19937 rng(987);
    std::uniform_real_distribution<double> value(0.5, 8.0), scale(0.1, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> xs = {value(rng), value(rng), value(rng)};
        const double k = scale(rng);
        std::vector<double> scaled = xs;
        for (double& x : scaled) x *= k;
        CHECK(snr_smaller_better(scaled) ==
              doctest::Approx(snr_smaller_better(xs) - 20.0 * std::log10(k)).epsilon(1e-9));

        // strictly decreasing in each replicate magnitude
        for (size_t i = 0; i < xs.size(); ++i) {
            std::vector<double> bumped = xs;
            bumped[i] += 0.25;
            CHECK(snr_smaller_better(bumped) < snr_smaller_better(xs));
        }
    }
}
