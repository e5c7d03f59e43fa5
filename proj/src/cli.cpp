#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "stairwheel/errors.hpp"
#include "stairwheel/pipeline.hpp"

namespace stairwheel {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitUsage = 64;

struct CliOptions {
    std::string config_path;
    std::string responses_path;
    std::string plan_path;
    std::string out_dir;
    double rp = 0.0, rc = 10.0;
    int nc = 0;
    double resolution_deg = 0.1;
    double grade = 0.0;
};

int run_design(const CliOptions& opt) {
    const PipelineConfig config = load_config(opt.config_path);
    const auto tight = std::min_element(
        config.stairs.begin(), config.stairs.end(),
        [](const StairSpec& a, const StairSpec& b) { return a.riser < b.riser; });
    ModuleGeometry module = config.module;
    module.module_length = config.module_length_factor().levels[1];
    const auto& rp_levels = config.parent_radius_factor().levels;
    const double rp_for_nc = *std::max_element(rp_levels.begin(), rp_levels.end());
    const DesignBounds bounds =
        design_bounds(config.child_radius, config.o_max, config.riser_min, config.lm_bounds, *tight,
                      module, rp_for_nc, config.nc_sweep_max, config.chain_links);
    std::cout << bounds_text(bounds, config.o_max, config.child_radius);
    if (!opt.out_dir.empty()) {
        std::filesystem::create_directories(opt.out_dir);
        std::ofstream csv(std::filesystem::path(opt.out_dir) / "bounds.csv");
        csv << bounds_csv(bounds);
        std::ofstream txt(std::filesystem::path(opt.out_dir) / "bounds.txt");
        txt << bounds_text(bounds, config.o_max, config.child_radius);
    }
    return kExitOk;
}

int run_oa(const CliOptions& opt) {
    const PipelineConfig config = load_config(opt.config_path);
    const ExperimentPlan plan = build_l9(config.control_factors);
    if (opt.out_dir.empty()) {
        std::cout << plan_csv(plan);
    } else {
        std::ofstream out(opt.out_dir, std::ios::binary);
        if (!out) throw IoError("cannot open for writing: " + opt.out_dir);
        out << plan_csv(plan);
    }
    return kExitOk;
}

int run_analyze(const CliOptions& opt) {
    const PipelineConfig config = load_config(opt.config_path);
    const ExperimentPlan plan = build_l9(config.control_factors);
    if (!opt.plan_path.empty()) check_plan_alignment(opt.plan_path, plan);
    const ResponseMatrix responses = ingest_responses(opt.responses_path, plan);
    const Report report = run_analysis(config, responses);
    const std::string out_dir = opt.out_dir.empty() ? config.output_dir : opt.out_dir;
    const auto written = emit_report(report, config, out_dir);

    const auto opt_values = report.optimal_values();
    std::cout << "optimal setting: module_length = " << opt_values[0]
              << " mm, parent_radius = " << opt_values[1]
              << " mm, child_count = " << static_cast<int>(opt_values[2]) << "\n";
    for (const std::string& w : report.warnings) std::cout << "warning: " << w << "\n";
    std::cout << written.size() << " files written to " << out_dir << "\n";
    return kExitOk;
}

int run_wheel(const CliOptions& opt) {
    const WheelSpec wheel(opt.rp, opt.rc, opt.nc);
    const WheelProfile profile = wheel_profile(wheel);
    char amp[64];
    std::snprintf(amp, sizeof(amp), "%.6f", transverse_amplitude(wheel));
    std::cout << "wheel r_p=" << opt.rp << " r_c=" << opt.rc << " n_c=" << opt.nc
              << ": amplitude " << amp << " mm, frequency " << transverse_frequency(wheel)
              << " per revolution\n";
    const std::string dir = opt.out_dir.empty() ? "." : opt.out_dir;
    std::filesystem::create_directories(dir);
    std::ostringstream stem;
    stem << "wheel_rp" << opt.rp << "_nc" << opt.nc;
    const std::string svg = (std::filesystem::path(dir) / (stem.str() + ".svg")).string();
    const std::string csv = (std::filesystem::path(dir) / (stem.str() + ".csv")).string();
    write_profile_svg(svg, profile);
    write_profile_csv(csv, profile, opt.resolution_deg);
    std::cout << "wrote " << svg << " and " << csv << "\n";
    return kExitOk;
}

int run_confirm(const CliOptions& opt) {
    const PipelineConfig config = load_config(opt.config_path);
    const ExperimentPlan plan = build_l9(config.control_factors);
    const ResponseMatrix responses = ingest_responses(opt.responses_path, plan);
    Report report = run_analysis(config, responses);
    if (!report.prediction)
        throw EmptySignificantSet("confirm: no significant factors, nothing to confirm against");
    report.confirmation = confirm(*report.prediction, opt.grade);
    std::cout << confirmation_text(report);
    if (!opt.out_dir.empty()) {
        std::filesystem::create_directories(opt.out_dir);
        std::ofstream out(std::filesystem::path(opt.out_dir) / "confirmation.txt");
        out << confirmation_text(report);
    }
    return kExitOk;
}

}  // namespace

int cli(int argc, const char* const* argv) {
    CLI::App app{"stairwheel: robust parameter design for arc-blended stair-climbing wheels"};
    app.require_subcommand(1);
    CliOptions opt;

    CLI::App* design = app.add_subcommand("design", "print the control-factor bounds");
    design->add_option("--config", opt.config_path, "configuration file")->required();
    design->add_option("--out", opt.out_dir, "directory for bounds.csv / bounds.txt");

    CLI::App* oa = app.add_subcommand("oa", "emit the orthogonal-array plan as CSV");
    oa->add_option("--config", opt.config_path, "configuration file")->required();
    oa->add_option("--out", opt.out_dir, "output file (stdout when omitted)");

    CLI::App* analyze = app.add_subcommand("analyze", "run the full analysis and write the report");
    analyze->add_option("--config", opt.config_path, "configuration file")->required();
    analyze->add_option("--responses", opt.responses_path, "response CSV")->required();
    analyze->add_option("--plan", opt.plan_path, "plan CSV to check against the configuration");
    analyze->add_option("--out", opt.out_dir, "output directory (default from config)");

    CLI::App* wheel = app.add_subcommand("wheel", "emit one wheel profile and its metrics");
    wheel->add_option("--rp", opt.rp, "parent radius, mm")->required();
    wheel->add_option("--rc", opt.rc, "child radius, mm");
    wheel->add_option("--nc", opt.nc, "child count")->required();
    wheel->add_option("--out", opt.out_dir, "output directory (default .)");
    wheel->add_option("--resolution", opt.resolution_deg, "polyline step, degrees (default 0.1)");

    CLI::App* confirm_cmd = app.add_subcommand("confirm", "compare an observed grade to the prediction");
    confirm_cmd->add_option("--config", opt.config_path, "configuration file")->required();
    confirm_cmd->add_option("--responses", opt.responses_path, "response CSV")->required();
    confirm_cmd->add_option("--grade", opt.grade, "observed grade at the optimal setting")->required();
    confirm_cmd->add_option("--out", opt.out_dir, "directory for confirmation.txt");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (design->parsed()) return run_design(opt);
        if (oa->parsed()) return run_oa(opt);
        if (analyze->parsed()) return run_analyze(opt);
        if (wheel->parsed()) return run_wheel(opt);
        if (confirm_cmd->parsed()) return run_confirm(opt);
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitUsage;
}

}  // namespace stairwheel
