#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "reference_data.hpp"
#include "stairwheel/errors.hpp"
#include "stairwheel/pipeline.hpp"

using namespace stairwheel;
namespace fs = std::filesystem;

namespace {

const std::string kDataDir = STAIRWHEEL_DATA_DIR;

PipelineConfig paper_config() { return load_config(kDataDir + "/paper.config"); }

ResponseMatrix paper_responses(const ExperimentPlan& plan) {
    return ingest_responses(kDataDir + "/paper_table2.csv", plan);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "stairwheel_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

// Runs the CLI with stdout captured; returns the exit code.
int run_cli(const std::vector<std::string>& args, std::string* stdout_text = nullptr) {
    std::vector<const char*> argv;
    argv.push_back("stairwheel");
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream sink;
    auto* old = std::cout.rdbuf(sink.rdbuf());
    const int code = cli(static_cast<int>(argv.size()), argv.data());
    std::cout.rdbuf(old);
    if (stdout_text) *stdout_text = sink.str();
    return code;
}

}  // namespace

TEST_CASE("response ingestion: shipped rows, misalignment errors") {
    const PipelineConfig cfg = paper_config();
    const ExperimentPlan plan = build_l9(cfg.control_factors);
    const ResponseMatrix m = paper_responses(plan);
    REQUIRE(m.run_count() == 9);
    CHECK(m.rows[0] == std::vector<double>{4.02, 4.07, 5.19});
    CHECK(m.rows[4] == std::vector<double>{2.99, 2.99, 3.08});

    const fs::path dir = fresh_dir("ingest");
    write_text(dir / "out_of_range.csv",
               "run,replicate_1,replicate_2,replicate_3\n10,1,1,1\n");
    CHECK_THROWS_AS(ingest_responses((dir / "out_of_range.csv").string(), plan), MissingRun);

    write_text(dir / "dup.csv",
               "run,replicate_1,replicate_2,replicate_3\n1,1,1,1\n1,2,2,2\n");
    CHECK_THROWS_AS(ingest_responses((dir / "dup.csv").string(), plan), DuplicateRun);

    std::string partial = "run,replicate_1,replicate_2,replicate_3\n";
    for (int r = 1; r <= 8; ++r) partial += std::to_string(r) + ",1,1,1\n";
    write_text(dir / "partial.csv", partial);
    CHECK_THROWS_AS(ingest_responses((dir / "partial.csv").string(), plan), MissingRun);

    write_text(dir / "nan.csv", "run,replicate_1,replicate_2,replicate_3\n1,1,abc,1\n");
    CHECK_THROWS_AS(ingest_responses((dir / "nan.csv").string(), plan), NonNumeric);

    CHECK_THROWS_AS(ingest_responses((dir / "absent.csv").string(), plan), IoError);
}

TEST_CASE("full analysis reproduces the reference outcome") {
    const PipelineConfig cfg = paper_config();
    const ExperimentPlan plan = build_l9(cfg.control_factors);
    const Report report = run_analysis(cfg, paper_responses(plan));

    // optimal setting: 260 mm module, 45 mm parent radius, 16 arcs
    CHECK(report.optimal_values() == std::vector<double>{260, 45, 16});

    // runs 8 and 5 take the top two ranks
    CHECK(report.grading.ranks[7] == 1);
    CHECK(report.grading.ranks[4] == 2);

    // parent radius owns the largest share of the variation
    const auto& rows = report.anova.factors;
    CHECK(rows[1].sum_squares > rows[0].sum_squares);
    CHECK(rows[1].sum_squares > rows[2].sum_squares);

    CHECK(report.significant == std::vector<std::string>{"module_length", "parent_radius"});
    REQUIRE(report.prediction.has_value());
    CHECK(report.prediction->predicted_grade == doctest::Approx(0.730133).epsilon(1e-4));

    CHECK(report.bounds.nc_min == 16);
    CHECK(report.bounds.nc_max == 20);

    // the shipped dataset runs without structural warnings
    CHECK(report.warnings.empty());
}

TEST_CASE("power-only weighting selects the argmax of the S/N level means") {
    PipelineConfig cfg = paper_config();
    cfg.weights = {1.0, 0.0, 0.0};
    const ExperimentPlan plan = build_l9(cfg.control_factors);
    const ResponseMatrix responses = paper_responses(plan);
    const Report report = run_analysis(cfg, responses);

    // oracle: level means of the S/N column itself
    const auto sn = snr_column(plan, responses);
    for (int f = 0; f < 3; ++f) {
        std::array<double, 3> mean{};
        for (int r = 0; r < 9; ++r) mean[plan.runs[r][f] - 1] += sn[r] / 3.0;
        int best = 0;
        for (int l = 1; l < 3; ++l)
            if (mean[l] > mean[best]) best = l;
        CHECK(report.influence_table.optimal_level[f] == best + 1);
    }
}

TEST_CASE("report files: determinism and inventory") {
    const PipelineConfig cfg = paper_config();
    const ExperimentPlan plan = build_l9(cfg.control_factors);
    const Report report = run_analysis(cfg, paper_responses(plan));

    const fs::path dir_a = fresh_dir("emit_a");
    const fs::path dir_b = fresh_dir("emit_b");
    const auto written_a = emit_report(report, cfg, dir_a.string());
    const auto written_b = emit_report(report, cfg, dir_b.string());
    REQUIRE(written_a.size() == written_b.size());

    // byte-identical outputs for identical inputs
    for (size_t i = 0; i < written_a.size(); ++i)
        CHECK(slurp(written_a[i]) == slurp(written_b[i]));

    // one profile pair per distinct wheel in the plan
    int svg = 0, poly = 0;
    for (const auto& entry : fs::directory_iterator(dir_a / "wheels")) {
        if (entry.path().extension() == ".svg") ++svg;
        if (entry.path().extension() == ".csv") ++poly;
    }
    CHECK(svg == 9);
    CHECK(poly == 9);

    CHECK(fs::exists(dir_a / "plan.csv"));
    CHECK(fs::exists(dir_a / "grey.csv"));
    CHECK(fs::exists(dir_a / "influence.csv"));
    CHECK(fs::exists(dir_a / "anova.csv"));
    CHECK(fs::exists(dir_a / "bounds.csv"));
    CHECK(fs::exists(dir_a / "bounds.txt"));
    CHECK(fs::exists(dir_a / "confirmation.txt"));
    CHECK(fs::exists(dir_a / "summary.txt"));

    // the bounds report carries the formula-vs-reference flag
    const std::string bounds = slurp(dir_a / "bounds.txt");
    CHECK(bounds.find("21.750000") != std::string::npos);
    CHECK(bounds.find("21.25") != std::string::npos);
    CHECK(bounds.find("0.50 mm") != std::string::npos);

    // grey.csv holds one row per run plus the header
    const std::string grey = slurp(dir_a / "grey.csv");
    CHECK(std::count(grey.begin(), grey.end(), '\n') == 10);
    CHECK(grey.find("8,0.742230,0.386150,1.000000,0.709460,1\n") != std::string::npos);

    // influence rows carry physical level values and the optimal flags
    const std::string influence = slurp(dir_a / "influence.csv");
    CHECK(influence.find("module_length,2,260.000000,0.669514,1\n") != std::string::npos);
    CHECK(influence.find("parent_radius,3,50.000000,0.531007,0\n") != std::string::npos);
    CHECK(influence.find("child_count,1,16,0.646239,1\n") != std::string::npos);

    const std::string anova = slurp(dir_a / "anova.csv");
    CHECK(anova.rfind("factor,ss,df,ms,f,contribution_pct\n", 0) == 0);
    CHECK(anova.find("\nerror,0.001654,2,0.000827,,") != std::string::npos);
    CHECK(anova.find("\ntotal,0.058937,8,,,100.000000\n") != std::string::npos);

    // ranks are a permutation of 1..9
    std::vector<int> ranks = report.grading.ranks;
    std::sort(ranks.begin(), ranks.end());
    for (int r = 0; r < 9; ++r) CHECK(ranks[r] == r + 1);
}

TEST_CASE("empty format list still writes the summary") {
    PipelineConfig cfg = paper_config();
    cfg.emit_csv = cfg.emit_text = cfg.emit_svg = false;
    const ExperimentPlan plan = build_l9(cfg.control_factors);
    const Report report = run_analysis(cfg, paper_responses(plan));
    const fs::path dir = fresh_dir("summary_only");
    const auto written = emit_report(report, cfg, dir.string());
    REQUIRE(written.size() == 1);
    CHECK(fs::path(written[0]).filename() == "summary.txt");
}

TEST_CASE("plan round-trip: emitted CSV passes the alignment check") {
    const PipelineConfig cfg = paper_config();
    const ExperimentPlan plan = build_l9(cfg.control_factors);
    const fs::path dir = fresh_dir("roundtrip");
    write_text(dir / "plan.csv", plan_csv(plan));
    CHECK_NOTHROW(check_plan_alignment((dir / "plan.csv").string(), plan));

    write_text(dir / "tampered.csv", plan_csv(plan) + "10,1,1,1,240,40,16\n");
    CHECK_THROWS_AS(check_plan_alignment((dir / "tampered.csv").string(), plan), ValidationError);
}

TEST_CASE("replicate count must match the configured noise levels") {
    PipelineConfig cfg = paper_config();
    cfg.stairs.pop_back();
    cfg.stair_names.pop_back();
    const ExperimentPlan plan = build_l9(cfg.control_factors);
    CHECK_THROWS_AS(run_analysis(cfg, paper_responses(plan)), ShapeMismatch);
}

TEST_CASE("cli subcommands and exit codes") {
    const std::string config = kDataDir + "/paper.config";
    const std::string responses = kDataDir + "/paper_table2.csv";
    const fs::path dir = fresh_dir("cli");

    std::string out;
    CHECK(run_cli({"design", "--config", config}, &out) == 0);
    CHECK(out.find("16 .. 20") != std::string::npos);

    CHECK(run_cli({"oa", "--config", config, "--out", (dir / "plan.csv").string()}) == 0);
    CHECK(run_cli({"analyze", "--config", config, "--responses", responses, "--plan",
                   (dir / "plan.csv").string(), "--out", (dir / "out").string()},
                  &out) == 0);
    CHECK(out.find("module_length = 260 mm, parent_radius = 45 mm, child_count = 16") !=
          std::string::npos);
    CHECK(fs::exists(dir / "out" / "summary.txt"));

    CHECK(run_cli({"wheel", "--rp", "45", "--rc", "10", "--nc", "16", "--out",
                   (dir / "wheel").string()},
                  &out) == 0);
    CHECK(out.find("amplitude 0.864662 mm") != std::string::npos);
    CHECK(out.find("frequency 16") != std::string::npos);
    CHECK(fs::exists(dir / "wheel" / "wheel_rp45_nc16.svg"));

    CHECK(run_cli({"confirm", "--config", config, "--responses", responses, "--grade",
                   "0.795383"},
                  &out) == 0);
    CHECK(out.find("observed grade   : 0.795383") != std::string::npos);
    CHECK(out.find("absolute gap") != std::string::npos);

    // validation failure: a config with only two factors
    std::string two_factors;
    {
        std::ifstream in(config);
        std::ostringstream ss;
        ss << in.rdbuf();
        two_factors = ss.str();
        const auto pos = two_factors.find("[factor.child_count]");
        two_factors.erase(pos, two_factors.find("# Noise levels") - pos);
    }
    write_text(dir / "two_factors.config", two_factors);
    CHECK(run_cli({"oa", "--config", (dir / "two_factors.config").string()}) == 1);

    // io failure: missing files
    CHECK(run_cli({"design", "--config", (dir / "nonexistent.config").string()}) == 2);
    CHECK(run_cli({"analyze", "--config", config, "--responses",
                   (dir / "nonexistent.csv").string()}) == 2);

    // usage errors: unknown flag, unknown subcommand, no subcommand
    CHECK(run_cli({"design", "--config", config, "--bogus"}) == 64);
    CHECK(run_cli({"frobnicate"}) == 64);
    CHECK(run_cli({}) == 64);
}

TEST_CASE("wheel profile files carry the sampled boundary") {
    const fs::path dir = fresh_dir("wheelfiles");
    REQUIRE(run_cli({"wheel", "--rp", "45", "--rc", "10", "--nc", "16", "--out", dir.string()}) ==
            0);
    const std::string csv = slurp(dir / "wheel_rp45_nc16.csv");
    CHECK(csv.rfind("x_mm,y_mm\n", 0) == 0);
    // 0.1 degree default resolution: 3600 samples + header
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3601);
    const std::string svg = slurp(dir / "wheel_rp45_nc16.svg");
    CHECK(svg.find("<path d=\"M ") != std::string::npos);
    CHECK(svg.find("A 10.000000 10.000000") != std::string::npos);

    // disjoint children surface as a validation failure
    CHECK(run_cli({"wheel", "--rp", "50", "--rc", "10", "--nc", "15", "--out", dir.string()}) == 1);
}
