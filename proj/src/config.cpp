#include "stairwheel/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "stairwheel/errors.hpp"

namespace stairwheel {

namespace {

struct RawValue {
    std::string text;
    int line = 0;
};

using Section = std::map<std::string, RawValue>;
using RawConfig = std::map<std::string, Section>;  // section name -> keys (insertion-order irrelevant)

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

RawConfig parse_raw(const std::string& text, const std::string& origin,
                    std::vector<std::string>* section_order) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    int content_lines = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        ++content_lines;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError(origin + ":" + std::to_string(lineno) + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ParseError(origin + ":" + std::to_string(lineno) + ": empty section name");
            if (!raw.count(section) && section_order) section_order->push_back(section);
            raw[section];  // sections may legitimately repeat (appended keys)
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ParseError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (section.empty())
            throw ParseError(origin + ":" + std::to_string(lineno) + ": key '" + key +
                             "' outside any section");
        if (raw[section].count(key))
            throw ParseError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key +
                             "' in [" + section + "]");
        raw[section][key] = {value, lineno};
    }
    if (content_lines == 0)
        throw ParseError(origin + ": empty configuration");
    return raw;
}

// Collects validation failures so a bad file reports everything at once.
struct Violations {
    std::vector<std::string> items;
    void add(const std::string& msg) { items.push_back(msg); }
    void raise_if_any(const std::string& origin) const {
        if (items.empty()) return;
        std::string msg = origin + ": " + std::to_string(items.size()) + " validation error(s):";
        for (const std::string& item : items) msg += "\n  - " + item;
        throw stairwheel::ValidationError(msg);
    }
};

class SectionReader {
public:
    SectionReader(const std::string& name, const Section* section, Violations& v)
        : name_(name), section_(section), v_(v) {}

    bool present() const { return section_ != nullptr; }

    std::optional<double> number(const std::string& key, bool required = false) {
        const RawValue* rv = fetch(key, required);
        if (!rv) return std::nullopt;
        char* end = nullptr;
        const double val = std::strtod(rv->text.c_str(), &end);
        if (rv->text.empty() || end != rv->text.c_str() + rv->text.size() || !std::isfinite(val)) {
            v_.add("[" + name_ + "] " + key + ": not a number: '" + rv->text + "' (line " +
                   std::to_string(rv->line) + ")");
            return std::nullopt;
        }
        return val;
    }

    std::optional<int> integer(const std::string& key, bool required = false) {
        const auto val = number(key, required);
        if (!val) return std::nullopt;
        if (*val != std::floor(*val)) {
            v_.add("[" + name_ + "] " + key + ": expected an integer, got " + std::to_string(*val));
            return std::nullopt;
        }
        return static_cast<int>(*val);
    }

    std::optional<std::string> text(const std::string& key, bool required = false) {
        const RawValue* rv = fetch(key, required);
        if (!rv) return std::nullopt;
        return rv->text;
    }

    std::optional<std::vector<double>> number_list(const std::string& key, bool required = false) {
        const RawValue* rv = fetch(key, required);
        if (!rv) return std::nullopt;
        std::vector<double> out;
        std::istringstream ss(rv->text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            char* end = nullptr;
            const double val = std::strtod(item.c_str(), &end);
            if (item.empty() || end != item.c_str() + item.size()) {
                v_.add("[" + name_ + "] " + key + ": not a number list: '" + rv->text + "' (line " +
                       std::to_string(rv->line) + ")");
                return std::nullopt;
            }
            out.push_back(val);
        }
        return out;
    }

    std::optional<std::vector<std::string>> text_list(const std::string& key, bool required = false) {
        const RawValue* rv = fetch(key, required);
        if (!rv) return std::nullopt;
        std::vector<std::string> out;
        std::istringstream ss(rv->text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) out.push_back(item);
        }
        return out;
    }

    void reject_unknown_keys(const std::set<std::string>& known) {
        if (!section_) return;
        for (const auto& [key, rv] : *section_)
            if (!known.count(key))
                v_.add("[" + name_ + "] unknown key '" + key + "' (line " + std::to_string(rv.line) +
                       ")");
    }

private:
    const RawValue* fetch(const std::string& key, bool required) {
        if (!section_) {
            if (required) v_.add("missing section [" + name_ + "]");
            return nullptr;
        }
        const auto it = section_->find(key);
        if (it == section_->end()) {
            if (required) v_.add("[" + name_ + "] missing required key '" + key + "'");
            return nullptr;
        }
        return &it->second;
    }

    std::string name_;
    const Section* section_;
    Violations& v_;
};

const Section* find(const RawConfig& raw, const std::string& name) {
    const auto it = raw.find(name);
    return it == raw.end() ? nullptr : &it->second;
}

}  // namespace

PipelineConfig parse_config(const std::string& text, const std::string& origin) {
    std::vector<std::string> section_order;
    const RawConfig raw = parse_raw(text, origin, &section_order);

    Violations v;
    PipelineConfig cfg;

    static const std::set<std::string> known_sections_fixed = {"analysis", "design", "module", "output"};
    static const std::set<std::string> known_factors = {"factor.module_length", "factor.parent_radius",
                                                        "factor.child_count"};
    static const std::set<std::string> known_attributes = {"attribute.power_sn", "attribute.amplitude",
                                                           "attribute.frequency"};
    for (const auto& [name, _] : raw) {
        if (known_sections_fixed.count(name) || known_factors.count(name) ||
            known_attributes.count(name) || name.rfind("stair.", 0) == 0)
            continue;
        v.add("unknown section [" + name + "]");
    }

    {
        SectionReader analysis("analysis", find(raw, "analysis"), v);
        if (const auto z = analysis.number("zeta")) {
            if (*z <= 0.0)
                v.add("[analysis] zeta must be positive");
            else
                cfg.zeta = *z;
        }
        if (const auto f = analysis.number("f_critical")) {
            if (*f < 0.0)
                v.add("[analysis] f_critical must be nonnegative");
            else
                cfg.f_critical = *f;
        }
        if (const auto w = analysis.number_list("weights")) cfg.weights = *w;
        if (const auto s = analysis.integer("seed")) {
            if (*s < 0)
                v.add("[analysis] seed must be nonnegative");
            else
                cfg.seed = static_cast<unsigned>(*s);
        }
        analysis.reject_unknown_keys({"zeta", "f_critical", "weights", "seed"});
    }

    {
        SectionReader design("design", find(raw, "design"), v);
        if (const auto x = design.number("child_radius_mm")) {
            if (*x <= 0.0)
                v.add("[design] child_radius_mm must be positive");
            else
                cfg.child_radius = *x;
        }
        if (const auto x = design.number("o_max_mm")) {
            if (*x <= 0.0)
                v.add("[design] o_max_mm must be positive");
            else
                cfg.o_max = *x;
        }
        if (const auto x = design.number("riser_min_mm")) {
            if (*x <= 0.0)
                v.add("[design] riser_min_mm must be positive");
            else
                cfg.riser_min = *x;
        }
        const auto lm_lo = design.number("lm_min_mm");
        const auto lm_hi = design.number("lm_max_mm");
        if (lm_lo) cfg.lm_bounds.lm_min = *lm_lo;
        if (lm_hi) cfg.lm_bounds.lm_max = *lm_hi;
        if (cfg.lm_bounds.lm_min > cfg.lm_bounds.lm_max)
            v.add("[design] lm_min_mm exceeds lm_max_mm");
        if (const auto x = design.integer("nc_sweep_max")) {
            if (*x < 3)
                v.add("[design] nc_sweep_max must be at least 3");
            else
                cfg.nc_sweep_max = *x;
        }
        if (const auto x = design.integer("chain_links")) {
            if (*x < 1)
                v.add("[design] chain_links must be at least 1");
            else
                cfg.chain_links = *x;
        }
        design.reject_unknown_keys({"child_radius_mm", "o_max_mm", "riser_min_mm", "lm_min_mm",
                                    "lm_max_mm", "nc_sweep_max", "chain_links"});
    }

    {
        SectionReader module("module", find(raw, "module"), v);
        if (const auto x = module.number("clearance_mm")) cfg.module.clearance = *x;
        if (const auto x = module.number("k1_ccw")) cfg.module.k1_ccw = *x;
        if (const auto x = module.number("k1_cw")) cfg.module.k1_cw = *x;
        if (const auto x = module.number("k2_ccw")) cfg.module.k2_ccw = *x;
        if (const auto x = module.number("k2_cw")) cfg.module.k2_cw = *x;
        module.reject_unknown_keys({"clearance_mm", "k1_ccw", "k1_cw", "k2_ccw", "k2_cw"});
        if (cfg.module.clearance < 0.0) v.add("[module] clearance_mm must be nonnegative");
        for (double k : {cfg.module.k1_ccw, cfg.module.k1_cw, cfg.module.k2_ccw, cfg.module.k2_cw})
            if (k < 0.0) v.add("[module] spring constants must be nonnegative");
    }

    // Factors, fixed A/B/C order.
    static const std::array<const char*, 3> factor_names = {"module_length", "parent_radius",
                                                            "child_count"};
    for (const char* fname : factor_names) {
        const std::string section_name = std::string("factor.") + fname;
        SectionReader factor(section_name, find(raw, section_name), v);
        if (!factor.present()) {
            v.add("missing section [" + section_name +
                  "]: exactly 3 control factors are required (arity)");
            continue;
        }
        const auto role = factor.text("role");
        if (role && *role != "control")
            v.add("[" + section_name + "] role must be 'control', got '" + *role + "'");
        factor.text("unit");  // informational
        const auto levels = factor.number_list("levels", /*required=*/true);
        factor.reject_unknown_keys({"role", "unit", "levels"});
        if (!levels) continue;
        if (levels->size() != 3) {
            v.add("[" + section_name + "] L9 requires exactly 3 levels, got " +
                  std::to_string(levels->size()));
            continue;
        }
        std::set<double> distinct(levels->begin(), levels->end());
        if (distinct.size() != levels->size()) {
            v.add("[" + section_name + "] level values must be distinct");
            continue;
        }
        if (std::string(fname) == "child_count") {
            for (double l : *levels)
                if (l != std::floor(l) || l < 3) {
                    v.add("[" + section_name + "] child counts must be integers >= 3");
                    break;
                }
        } else {
            for (double l : *levels)
                if (l <= 0.0) {
                    v.add("[" + section_name + "] levels must be positive lengths");
                    break;
                }
        }
        cfg.control_factors.emplace_back(fname, *levels, FactorRole::Control);
    }

    // Stairs, in declared order.
    for (const std::string& name : section_order) {
        if (name.rfind("stair.", 0) != 0) continue;
        SectionReader stair(name, find(raw, name), v);
        StairSpec s;
        bool ok = true;
        if (const auto x = stair.number("riser_mm", true))
            s.riser = *x;
        else
            ok = false;
        if (const auto x = stair.number("tread_mm", true))
            s.tread = *x;
        else
            ok = false;
        if (const auto x = stair.number("overhang_mm", true))
            s.overhang = *x;
        else
            ok = false;
        if (const auto x = stair.number("friction", true))
            s.friction = *x;
        else
            ok = false;
        stair.reject_unknown_keys({"riser_mm", "tread_mm", "overhang_mm", "friction"});
        if (!ok) continue;
        try {
            s.validate(cfg.o_max);
        } catch (const ValidationError& e) {
            v.add("[" + name + "] " + e.what());
            continue;
        }
        cfg.stair_names.push_back(name.substr(6));
        cfg.stairs.push_back(s);
    }
    if (cfg.stairs.empty()) v.add("no [stair.*] noise levels defined");

    // Attributes, fixed order.
    static const std::array<std::pair<const char*, Direction>, 3> attr_defaults = {
        std::pair{"power_sn", Direction::LargerIsBetter},
        std::pair{"amplitude", Direction::SmallerIsBetter},
        std::pair{"frequency", Direction::SmallerIsBetter}};
    for (const auto& [aname, dflt] : attr_defaults) {
        const std::string section_name = std::string("attribute.") + aname;
        SectionReader attr(section_name, find(raw, section_name), v);
        AttributeSpec spec;
        spec.name = aname;
        spec.direction = dflt;
        spec.source = std::string(aname) == "power_sn" ? "sn" : aname;
        if (attr.present()) {
            if (const auto d = attr.text("direction")) {
                if (*d == "larger_is_better")
                    spec.direction = Direction::LargerIsBetter;
                else if (*d == "smaller_is_better")
                    spec.direction = Direction::SmallerIsBetter;
                else
                    v.add("[" + section_name + "] direction must be larger_is_better or smaller_is_better");
            }
            attr.reject_unknown_keys({"direction"});
        }
        cfg.attributes.push_back(spec);
    }

    if (cfg.weights.empty())
        cfg.weights.assign(cfg.attributes.size(), 1.0 / cfg.attributes.size());
    else if (cfg.weights.size() != cfg.attributes.size())
        v.add("[analysis] weights: expected " + std::to_string(cfg.attributes.size()) +
              " entries, got " + std::to_string(cfg.weights.size()));
    else {
        double sum = 0.0;
        bool neg = false;
        for (double w : cfg.weights) {
            sum += w;
            neg = neg || w < 0.0;
        }
        if (neg)
            v.add("[analysis] weights must be nonnegative");
        else if (std::abs(sum - 1.0) > 1e-9)
            v.add("[analysis] weights must sum to 1");
    }

    {
        SectionReader output("output", find(raw, "output"), v);
        if (const auto d = output.text("directory")) cfg.output_dir = *d;
        if (const auto formats = output.text_list("formats")) {
            cfg.emit_csv = cfg.emit_text = cfg.emit_svg = false;
            for (const std::string& f : *formats) {
                if (f == "csv")
                    cfg.emit_csv = true;
                else if (f == "text")
                    cfg.emit_text = true;
                else if (f == "svg")
                    cfg.emit_svg = true;
                else
                    v.add("[output] unknown format '" + f + "' (expected csv, text, svg)");
            }
        }
        output.reject_unknown_keys({"directory", "formats"});
    }

    v.raise_if_any(origin);
    return cfg;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

}  // namespace stairwheel
