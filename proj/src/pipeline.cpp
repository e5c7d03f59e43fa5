#include "stairwheel/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "stairwheel/errors.hpp"

namespace stairwheel {

namespace {

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string fmt2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

// Compact value for file names and level labels: trailing zeros trimmed.
std::string fmtg(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace

// ---------------------------------------------------------------------------
// Ingestion
// ---------------------------------------------------------------------------

ResponseMatrix ingest_responses(const std::string& path, const ExperimentPlan& plan) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open responses file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty responses file");
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "run")
        throw ParseError(path + ":1: expected header run,replicate_1,...");
    for (size_t i = 1; i < header.size(); ++i)
        if (header[i] != "replicate_" + std::to_string(i))
            throw ParseError(path + ":1: expected column 'replicate_" + std::to_string(i) +
                             "', got '" + header[i] + "'");
    const size_t replicates = header.size() - 1;

    const int runs = plan.run_count();
    std::vector<std::vector<double>> rows(runs);
    std::vector<bool> seen(runs, false);
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(header.size()) + " cells, got " +
                             std::to_string(cells.size()));
        char* end = nullptr;
        const long run = std::strtol(cells[0].c_str(), &end, 10);
        if (cells[0].empty() || end != cells[0].c_str() + cells[0].size())
            throw NonNumeric(path + ":" + std::to_string(lineno) + ": run id '" + cells[0] +
                             "' is not an integer");
        if (run < 1 || run > runs)
            throw MissingRun(path + ":" + std::to_string(lineno) + ": run " + std::to_string(run) +
                             " outside the plan range 1.." + std::to_string(runs));
        if (seen[run - 1])
            throw DuplicateRun(path + ":" + std::to_string(lineno) + ": duplicate run " +
                               std::to_string(run));
        seen[run - 1] = true;
        std::vector<double> values;
        values.reserve(replicates);
        for (size_t i = 1; i < cells.size(); ++i) {
            end = nullptr;
            const double v = std::strtod(cells[i].c_str(), &end);
            if (cells[i].empty() || end != cells[i].c_str() + cells[i].size() || !std::isfinite(v))
                throw NonNumeric(path + ":" + std::to_string(lineno) + ": value '" + cells[i] +
                                 "' is not numeric");
            values.push_back(v);
        }
        rows[run - 1] = std::move(values);
    }
    for (int r = 0; r < runs; ++r)
        if (!seen[r]) throw MissingRun(path + ": run " + std::to_string(r + 1) + " is missing");

    ResponseMatrix out;
    out.rows = std::move(rows);
    out.validate();
    return out;
}

// ---------------------------------------------------------------------------
// Analysis
// ---------------------------------------------------------------------------

std::vector<double> Report::optimal_values() const {
    std::vector<double> out;
    for (size_t f = 0; f < influence_table.factor_names.size(); ++f)
        out.push_back(plan.factors[f].levels[influence_table.optimal_level[f] - 1]);
    return out;
}

Report run_analysis(const PipelineConfig& config, const ResponseMatrix& responses) {
    Report report;
    report.plan = build_l9(config.control_factors);
    responses.validate();
    if (responses.run_count() != report.plan.run_count())
        throw ShapeMismatch("run_analysis: " + std::to_string(responses.run_count()) +
                            " response rows for " + std::to_string(report.plan.run_count()) +
                            " plan runs");
    if (responses.replicate_count() != static_cast<int>(config.stairs.size()))
        throw ShapeMismatch("run_analysis: " + std::to_string(responses.replicate_count()) +
                            " replicates per run but " + std::to_string(config.stairs.size()) +
                            " stair noise levels configured");
    report.responses = responses;
    report.sn = snr_column(report.plan, responses);

    // Attribute assembly: power robustness via its S/N ratio; amplitude and
    // frequency recomputed from the wheel geometry at full precision.
    report.attributes.names = {"power_sn", "amplitude", "frequency"};
    for (int r = 0; r < report.plan.run_count(); ++r) {
        const double rp = report.plan.level_value(r, 1);
        const int nc = static_cast<int>(report.plan.level_value(r, 2));
        const WheelSpec wheel(rp, config.child_radius, nc);
        report.attributes.values.push_back(
            {report.sn[r], transverse_amplitude(wheel), static_cast<double>(transverse_frequency(wheel))});
    }

    report.normalized = normalize(report.attributes, config.attributes);
    for (size_t a = 0; a < report.normalized.degenerate.size(); ++a)
        if (report.normalized.degenerate[a])
            report.warnings.push_back("attribute '" + report.attributes.names[a] +
                                      "' is constant across runs; normalized to the ideal 1.0");

    report.grc = grey_coefficients(report.normalized, config.zeta);
    report.grading = grades(report.grc, config.weights);
    report.influence_table = influence(report.plan, report.grading.grades);
    report.anova = anova_from_grades(report.plan, report.grading.grades);
    if (report.anova.negative_error_clamped)
        report.warnings.push_back("ANOVA error sum of squares slightly negative; clamped to 0");
    if (report.anova.zero_total)
        report.warnings.push_back("ANOVA total variation is zero; contributions reported as 0");
    report.significant = significant_factors(report.anova, config.f_critical);
    if (report.significant.empty())
        report.warnings.push_back("no factor reaches F >= " + fmtg(config.f_critical) +
                                  "; grade prediction skipped");
    else
        report.prediction = predict_grade(report.influence_table, report.significant);

    // Bounds are evaluated against the tightest stair (smallest riser), the
    // median module-length level and the largest parent-radius level.
    const auto tight = std::min_element(config.stairs.begin(), config.stairs.end(),
                                        [](const StairSpec& a, const StairSpec& b) {
                                            return a.riser < b.riser;
                                        });
    ModuleGeometry module = config.module;
    module.module_length = config.module_length_factor().levels[1];
    const auto& rp_levels = config.parent_radius_factor().levels;
    const double rp_for_nc = *std::max_element(rp_levels.begin(), rp_levels.end());
    report.bounds = design_bounds(config.child_radius, config.o_max, config.riser_min,
                                  config.lm_bounds, *tight, module, rp_for_nc,
                                  config.nc_sweep_max, config.chain_links);
    return report;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::string plan_csv(const ExperimentPlan& plan) {
    std::ostringstream out;
    out << "run,A,B,C,A_value_mm,B_value_mm,C_value\n";
    for (int r = 0; r < plan.run_count(); ++r) {
        out << (r + 1);
        for (int f = 0; f < 3; ++f) out << "," << plan.runs[r][f];
        out << "," << fmt6(plan.level_value(r, 0)) << "," << fmt6(plan.level_value(r, 1)) << ","
            << static_cast<int>(plan.level_value(r, 2)) << "\n";
    }
    return out.str();
}

std::string grey_csv(const Report& report) {
    std::ostringstream out;
    out << "run,grc_power,grc_amplitude,grc_frequency,grade,rank\n";
    for (size_t r = 0; r < report.grc.size(); ++r) {
        out << (r + 1);
        for (double g : report.grc[r]) out << "," << fmt6(g);
        out << "," << fmt6(report.grading.grades[r]) << "," << report.grading.ranks[r] << "\n";
    }
    return out.str();
}

std::string influence_csv(const Report& report) {
    std::ostringstream out;
    out << "factor,level,value,avg_grade,optimal_flag\n";
    const InfluenceTable& t = report.influence_table;
    for (size_t f = 0; f < t.factor_names.size(); ++f) {
        for (int l = 0; l < 3; ++l) {
            const double value = report.plan.factors[f].levels[l];
            out << t.factor_names[f] << "," << (l + 1) << ",";
            if (t.factor_names[f] == "child_count")
                out << static_cast<int>(value);
            else
                out << fmt6(value);
            out << "," << fmt6(t.level_averages[f][l]) << ","
                << (t.optimal_level[f] == l + 1 ? 1 : 0) << "\n";
        }
    }
    return out.str();
}

std::string anova_csv(const AnovaTable& table) {
    std::ostringstream out;
    out << "factor,ss,df,ms,f,contribution_pct\n";
    for (const AnovaFactorRow& row : table.factors)
        out << row.name << "," << fmt6(row.sum_squares) << "," << row.dof << ","
            << fmt6(row.mean_square) << "," << fmt6(row.f_value) << ","
            << fmt6(row.contribution_pct) << "\n";
    out << "error," << fmt6(table.error_ss) << "," << table.error_dof << "," << fmt6(table.error_ms)
        << ",," << fmt6(table.error_contribution_pct) << "\n";
    out << "total," << fmt6(table.total_ss) << "," << table.total_dof << ",,,"
        << fmt6(table.zero_total ? 0.0 : 100.0) << "\n";
    return out.str();
}

std::string bounds_csv(const DesignBounds& bounds) {
    std::ostringstream out;
    out << "quantity,min,max\n";
    out << "rp_mm," << fmt6(bounds.rp_min) << "," << fmt6(bounds.rp_max) << "\n";
    out << "lm_mm," << fmt6(bounds.lm_min) << "," << fmt6(bounds.lm_max) << "\n";
    out << "nc," << bounds.nc_min << "," << bounds.nc_max << "\n";
    return out.str();
}

std::string bounds_text(const DesignBounds& bounds, double o_max, double child_radius) {
    std::ostringstream out;
    out << "Control-factor bounds\n";
    out << "  parent radius r_p : " << fmt6(bounds.rp_min) << " .. " << fmt6(bounds.rp_max)
        << " mm\n";
    out << "  module length l_m : " << fmt6(bounds.lm_min) << " .. " << fmt6(bounds.lm_max)
        << " mm\n";
    out << "  child count   n_c : " << bounds.nc_min << " .. " << bounds.nc_max << "\n";
    out << "note: r_p lower bound is o_max - r_c = " << fmtg(o_max) << " - " << fmtg(child_radius)
        << " = " << fmt6(bounds.rp_min) << " mm; the reference bound tables list 21.25 mm,\n"
        << "a 0.50 mm discrepancy -- the formula value is reported here.\n";
    return out.str();
}

std::string confirmation_text(const Report& report) {
    std::ostringstream out;
    out << "Optimal setting confirmation\n";

    // Best run actually present in the orthogonal array.
    const auto best_it =
        std::min_element(report.grading.ranks.begin(), report.grading.ranks.end());
    const int best_run = static_cast<int>(best_it - report.grading.ranks.begin());
    out << "  best OA run      : run " << (best_run + 1) << " (A" << report.plan.runs[best_run][0]
        << " B" << report.plan.runs[best_run][1] << " C" << report.plan.runs[best_run][2]
        << "), grade " << fmt6(report.grading.grades[best_run]) << "\n";

    const auto opt = report.optimal_values();
    out << "  optimal setting  : A" << report.influence_table.optimal_level[0] << " B"
        << report.influence_table.optimal_level[1] << " C" << report.influence_table.optimal_level[2]
        << " (module_length = " << fmtg(opt[0]) << " mm, parent_radius = " << fmtg(opt[1])
        << " mm, child_count = " << static_cast<int>(opt[2]) << ")\n";

    if (report.prediction) {
        out << "  mean grade       : " << fmt6(report.prediction->grand_mean) << "\n";
        out << "  predicted grade  : " << fmt6(report.prediction->predicted_grade) << "\n";
    } else {
        out << "  predicted grade  : unavailable (no significant factors)\n";
    }
    if (report.confirmation) {
        out << "  observed grade   : " << fmt6(report.confirmation->observed) << "\n";
        out << "  absolute gap     : " << fmt6(report.confirmation->abs_gap) << "\n";
        out << "  relative gap     : " << fmt6(report.confirmation->rel_gap) << "\n";
    } else {
        out << "  observed grade   : not provided\n";
    }
    return out.str();
}

namespace {

// Right-aligned cell for numeric columns.
std::string cell(const std::string& text, int width) {
    return text.size() >= static_cast<size_t>(width)
               ? text
               : std::string(width - text.size(), ' ') + text;
}

// Left-aligned cell for name columns.
std::string lcell(const std::string& text, int width) {
    return text.size() >= static_cast<size_t>(width)
               ? text
               : text + std::string(width - text.size(), ' ');
}

}  // namespace

std::string summary_text(const Report& report) {
    std::ostringstream out;
    out << "stairwheel analysis summary\n";
    out << "===========================\n\n";

    out << "Experiment plan and results (" << report.plan.array_id << " orthogonal array)\n";
    out << "run  A B C";
    for (int i = 1; i <= report.responses.replicate_count(); ++i)
        out << cell("p_" + std::to_string(i), 7);
    out << cell("sn_db", 8) << cell("amp_mm", 8) << cell("freq", 6) << cell("grc_pow", 9)
        << cell("grc_amp", 9) << cell("grc_freq", 10) << cell("grade", 7) << cell("rank", 6)
        << "\n";
    for (int r = 0; r < report.plan.run_count(); ++r) {
        out << cell(std::to_string(r + 1), 3) << "  " << report.plan.runs[r][0] << " "
            << report.plan.runs[r][1] << " " << report.plan.runs[r][2];
        for (double p : report.responses.rows[r]) out << cell(fmt2(p), 7);
        out << cell(fmt2(report.sn[r]), 8) << cell(fmt2(report.attributes.values[r][1]), 8)
            << cell(std::to_string(static_cast<int>(report.attributes.values[r][2])), 6);
        out << cell(fmt2(report.grc[r][0]), 9) << cell(fmt2(report.grc[r][1]), 9)
            << cell(fmt2(report.grc[r][2]), 10);
        out << cell(fmt2(report.grading.grades[r]), 7)
            << cell(std::to_string(report.grading.ranks[r]), 6) << "\n";
    }

    out << "\nInfluence of control factors on the grey relational grade\n";
    const InfluenceTable& t = report.influence_table;
    out << lcell("factor", 16) << cell("level_1", 10) << cell("level_2", 10) << cell("level_3", 10)
        << "\n";
    for (size_t f = 0; f < t.factor_names.size(); ++f) {
        out << lcell(t.factor_names[f], 16);
        for (int l = 0; l < 3; ++l)
            out << cell(fmt6(t.level_averages[f][l]) + (t.optimal_level[f] == l + 1 ? "*" : " "),
                        10);
        out << "\n";
    }
    out << "optimal levels are marked *; grand mean grade: " << fmt6(t.grand_mean) << "\n";

    out << "\nAnalysis of variance\n";
    out << lcell("factor", 16) << cell("ss", 10) << cell("df", 4) << cell("ms", 10) << cell("f", 12)
        << cell("pct", 12) << "\n";
    for (const AnovaFactorRow& row : report.anova.factors)
        out << lcell(row.name, 16) << cell(fmt6(row.sum_squares), 10) << cell(std::to_string(row.dof), 4)
            << cell(fmt6(row.mean_square), 10) << cell(fmt6(row.f_value), 12)
            << cell(fmt6(row.contribution_pct), 12) << "\n";
    out << lcell("error", 16) << cell(fmt6(report.anova.error_ss), 10)
        << cell(std::to_string(report.anova.error_dof), 4) << cell(fmt6(report.anova.error_ms), 10)
        << cell("-", 12) << cell(fmt6(report.anova.error_contribution_pct), 12) << "\n";
    out << lcell("total", 16) << cell(fmt6(report.anova.total_ss), 10)
        << cell(std::to_string(report.anova.total_dof), 4) << "\n";

    out << "\nSignificant factors:";
    if (report.significant.empty())
        out << " none\n";
    else {
        for (const std::string& name : report.significant) out << " " << name;
        out << "\n";
    }

    const auto opt = report.optimal_values();
    out << "\nOptimal setting: module_length = " << fmtg(opt[0]) << " mm, parent_radius = "
        << fmtg(opt[1]) << " mm, child_count = " << static_cast<int>(opt[2]) << "\n";

    out << "\n" << confirmation_text(report);

    out << "\nControl-factor bounds\n";
    out << "  parent radius r_p : " << fmt6(report.bounds.rp_min) << " .. "
        << fmt6(report.bounds.rp_max) << " mm\n";
    out << "  module length l_m : " << fmt6(report.bounds.lm_min) << " .. "
        << fmt6(report.bounds.lm_max) << " mm\n";
    out << "  child count   n_c : " << report.bounds.nc_min << " .. " << report.bounds.nc_max
        << "\n";

    if (!report.warnings.empty()) {
        out << "\nWarnings:\n";
        for (const std::string& w : report.warnings) out << "  - " << w << "\n";
    }
    return out.str();
}

void check_plan_alignment(const std::string& path, const ExperimentPlan& plan) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open plan file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (ss.str() != plan_csv(plan))
        throw ValidationError("plan file " + path + " does not match the configured orthogonal array");
}

std::vector<std::string> emit_report(const Report& report, const PipelineConfig& config,
                                     const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());

    std::vector<std::string> written;
    const auto emit = [&](const std::string& name, const std::string& content) {
        const std::string path = (fs::path(out_dir) / name).string();
        write_file(path, content);
        written.push_back(path);
    };

    if (config.emit_csv) {
        emit("plan.csv", plan_csv(report.plan));
        emit("grey.csv", grey_csv(report));
        emit("influence.csv", influence_csv(report));
        emit("anova.csv", anova_csv(report.anova));
        emit("bounds.csv", bounds_csv(report.bounds));
    }
    if (config.emit_text) {
        emit("bounds.txt", bounds_text(report.bounds, config.o_max, config.child_radius));
        emit("confirmation.txt", confirmation_text(report));
    }
    if (config.emit_svg || config.emit_csv) {
        const fs::path wheel_dir = fs::path(out_dir) / "wheels";
        fs::create_directories(wheel_dir, ec);
        if (ec) throw IoError("cannot create output directory " + wheel_dir.string());
        // One profile per distinct (parent radius, child count) pair in the plan.
        std::vector<std::pair<double, int>> seen;
        for (int r = 0; r < report.plan.run_count(); ++r) {
            const double rp = report.plan.level_value(r, 1);
            const int nc = static_cast<int>(report.plan.level_value(r, 2));
            if (std::find(seen.begin(), seen.end(), std::make_pair(rp, nc)) != seen.end()) continue;
            seen.emplace_back(rp, nc);
            const WheelProfile profile = wheel_profile(WheelSpec(rp, config.child_radius, nc));
            const std::string stem = "wheel_rp" + std::string(fmtg(rp)) + "_nc" + std::to_string(nc);
            if (config.emit_svg) {
                const std::string path = (wheel_dir / (stem + ".svg")).string();
                write_profile_svg(path, profile);
                written.push_back(path);
            }
            if (config.emit_csv) {
                const std::string path = (wheel_dir / (stem + ".csv")).string();
                write_profile_csv(path, profile);
                written.push_back(path);
            }
        }
    }
    emit("summary.txt", summary_text(report));
    return written;
}

}  // namespace stairwheel
