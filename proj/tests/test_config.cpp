#include <doctest.h>

#include <string>

#include "stairwheel/config.hpp"
#include "stairwheel/errors.hpp"

using namespace stairwheel;

#ifndef STAIRWHEEL_DATA_DIR
#error "STAIRWHEEL_DATA_DIR must point at the shipped data directory"
#endif

namespace {

const std::string kDataDir = STAIRWHEEL_DATA_DIR;

// Minimal valid configuration used as a mutation base.
std::string minimal_config() {
    return R"([factor.module_length]
role = control
unit = mm
levels = 240, 260, 280

[factor.parent_radius]
role = control
unit = mm
levels = 40, 45, 50

[factor.child_count]
role = control
unit = count
levels = 16, 18, 20

[stair.only]
riser_mm = 177.8
tread_mm = 279.4
overhang_mm = 31.75
friction = 0.3
)";
}

}  // namespace

TEST_CASE("shipped configuration loads with the documented defaults") {
    const PipelineConfig cfg = load_config(kDataDir + "/paper.config");
    CHECK(cfg.zeta == 0.5);
    CHECK(cfg.f_critical == 10.0);
    CHECK(cfg.child_radius == 10.0);
    CHECK(cfg.o_max == 31.75);
    CHECK(cfg.riser_min == 177.8);
    CHECK(cfg.lm_bounds.lm_min == 210.96);
    CHECK(cfg.lm_bounds.lm_max == 352.37);

    REQUIRE(cfg.control_factors.size() == 3);
    CHECK(cfg.module_length_factor().levels == std::vector<double>{240, 260, 280});
    CHECK(cfg.parent_radius_factor().levels == std::vector<double>{40, 45, 50});
    CHECK(cfg.child_count_factor().levels == std::vector<double>{16, 18, 20});

    REQUIRE(cfg.stairs.size() == 3);
    CHECK(cfg.stairs[0].riser == 177.8);
    CHECK(cfg.stairs[1].riser == 190.5);
    CHECK(cfg.stairs[2].riser == 203.2);

    REQUIRE(cfg.attributes.size() == 3);
    CHECK(cfg.attributes[0].direction == Direction::LargerIsBetter);
    CHECK(cfg.attributes[1].direction == Direction::SmallerIsBetter);
    CHECK(cfg.weights == std::vector<double>(3, 1.0 / 3.0));

    CHECK(cfg.module.clearance == 100.0);
    CHECK(cfg.module.k1_ccw == 74.47);
    CHECK(cfg.output_dir == "out");
    CHECK(cfg.emit_csv);
    CHECK(cfg.emit_svg);
}

TEST_CASE("empty or malformed text raises ParseError") {
    CHECK_THROWS_AS(parse_config("", "t"), ParseError);
    CHECK_THROWS_AS(parse_config("   \n  # only a comment\n", "t"), ParseError);
    CHECK_THROWS_AS(parse_config("[unterminated\nkey = 1\n", "t"), ParseError);
    CHECK_THROWS_AS(parse_config("key_without_section = 1\n", "t"), ParseError);
    CHECK_THROWS_AS(parse_config("[a]\nnot a key value line\n", "t"), ParseError);
    CHECK_THROWS_AS(parse_config("[analysis]\nzeta = 0.5\nzeta = 0.6\n", "t"), ParseError);
}

TEST_CASE("four levels for a factor is a validation error") {
    std::string text = minimal_config();
    const std::string needle = "levels = 240, 260, 280";
    text.replace(text.find(needle), needle.size(), "levels = 240, 260, 280, 300");
    try {
        parse_config(text, "t");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("3 levels") != std::string::npos);
    }
}

TEST_CASE("unknown sections and keys are rejected") {
    CHECK_THROWS_AS(parse_config(minimal_config() + "[mystery]\nx = 1\n", "t"), ValidationError);
    CHECK_THROWS_AS(parse_config(minimal_config() + "[analysis]\nzetta = 0.5\n", "t"),
                    ValidationError);
}

TEST_CASE("all violations are reported at once") {
    std::string text = minimal_config() + "[analysis]\nzeta = -1\nf_critical = maybe\n";
    try {
        parse_config(text, "t");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        const std::string what = e.what();
        CHECK(what.find("zeta") != std::string::npos);
        CHECK(what.find("f_critical") != std::string::npos);
        CHECK(what.find("2 validation error") != std::string::npos);
    }
}

TEST_CASE("missing factor section, overhang above the cap, bad weights") {
    std::string no_factor = minimal_config();
    const auto pos = no_factor.find("[factor.child_count]");
    no_factor.erase(pos, no_factor.find("[stair.only]") - pos);
    CHECK_THROWS_AS(parse_config(no_factor, "t"), ValidationError);

    std::string high_overhang = minimal_config();
    const std::string needle = "overhang_mm = 31.75";
    high_overhang.replace(high_overhang.find(needle), needle.size(), "overhang_mm = 40");
    CHECK_THROWS_AS(parse_config(high_overhang, "t"), ValidationError);

    CHECK_THROWS_AS(parse_config(minimal_config() + "[analysis]\nweights = 0.5, 0.2, 0.2\n", "t"),
                    ValidationError);
    CHECK_THROWS_AS(parse_config(minimal_config() + "[analysis]\nweights = 0.5, 0.5\n", "t"),
                    ValidationError);
}

TEST_CASE("output formats filter the emitters") {
    const PipelineConfig cfg =
        parse_config(minimal_config() + "[output]\nformats = text\ndirectory = elsewhere\n", "t");
    CHECK(cfg.emit_text);
    CHECK(!cfg.emit_csv);
    CHECK(!cfg.emit_svg);
    CHECK(cfg.output_dir == "elsewhere");

    CHECK_THROWS_AS(parse_config(minimal_config() + "[output]\nformats = pdf\n", "t"),
                    ValidationError);

    // an explicitly empty format list turns every optional emitter off
    const PipelineConfig none = parse_config(minimal_config() + "[output]\nformats =\n", "t");
    CHECK(!none.emit_csv);
    CHECK(!none.emit_text);
    CHECK(!none.emit_svg);
}
