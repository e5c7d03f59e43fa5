#include "stairwheel/design_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "stairwheel/errors.hpp"

namespace stairwheel {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

WheelSpec::WheelSpec(double rp, double rc, int nc)
    : parent_radius(rp), child_radius(rc), child_count(nc) {
    if (!(rp > 0.0) || !std::isfinite(rp))
        throw ValidationError("WheelSpec: parent_radius must be positive, got " + fmt(rp));
    if (!(rc > 0.0) || !std::isfinite(rc))
        throw ValidationError("WheelSpec: child_radius must be positive, got " + fmt(rc));
    if (nc < 3)
        throw ValidationError("WheelSpec: child_count must be >= 3, got " + std::to_string(nc));
}

void StairSpec::validate(std::optional<double> overhang_limit) const {
    if (!(riser > 0.0)) throw ValidationError("StairSpec: riser must be positive");
    if (!(tread > 0.0)) throw ValidationError("StairSpec: tread must be positive");
    if (overhang < 0.0) throw ValidationError("StairSpec: overhang must be nonnegative");
    if (friction < 0.0) throw ValidationError("StairSpec: friction must be nonnegative");
    if (overhang_limit && overhang > *overhang_limit + 1e-12)
        throw ValidationError("StairSpec: overhang " + fmt(overhang) + " mm exceeds the allowed maximum " +
                              fmt(*overhang_limit) + " mm");
}

void ModuleGeometry::validate() const {
    if (!(module_length > 0.0)) throw ValidationError("ModuleGeometry: module_length must be positive");
    if (clearance < 0.0) throw ValidationError("ModuleGeometry: clearance must be nonnegative");
    for (double k : {k1_ccw, k1_cw, k2_ccw, k2_cw})
        if (k < 0.0) throw ValidationError("ModuleGeometry: spring constants must be nonnegative");
}

WheelProfile::WheelProfile(std::vector<ArcSegment> arcs, WheelSpec spec)
    : arcs_(std::move(arcs)), spec_(spec) {}

std::vector<Vec2> WheelProfile::vertices() const {
    std::vector<Vec2> out;
    out.reserve(arcs_.size());
    for (const ArcSegment& a : arcs_)
        out.push_back(a.center + from_angle(a.end_angle) * a.radius);
    return out;
}

double WheelProfile::boundary_radius(double angle) const {
    // Support-function form: within each sector the boundary belongs to the
    // nearest child circle, so reduce the angle into one sector.
    const double delta = spec_.sector_angle();
    const double beta = std::remainder(angle, delta);  // [-delta/2, delta/2]
    const double rp = spec_.parent_radius, rc = spec_.child_radius;
    const double s = rp * std::sin(beta);
    return rp * std::cos(beta) + std::sqrt(rc * rc - s * s);
}

std::vector<Vec2> WheelProfile::sample(double step_deg) const {
    std::vector<Vec2> pts;
    const double step = step_deg * kPi / 180.0;
    const int n = static_cast<int>(std::floor(2.0 * kPi / step));
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double a = i * step;
        pts.push_back(from_angle(a) * boundary_radius(a));
    }
    return pts;
}

// ---------------------------------------------------------------------------
// Transverse-alteration metrics
// ---------------------------------------------------------------------------

double transverse_amplitude(const WheelSpec& wheel) {
    return wheel.parent_radius * (1.0 - std::cos(kPi / wheel.child_count));
}

int transverse_frequency(const WheelSpec& wheel) {
    return wheel.child_count;
}

double rolling_height(const WheelSpec& wheel, double roll_angle) {
    const double phi = std::remainder(roll_angle, wheel.sector_angle());
    return wheel.child_radius + wheel.parent_radius * std::cos(phi);
}

// ---------------------------------------------------------------------------
// Profile construction
// ---------------------------------------------------------------------------

int nc_lower_bound(double parent_radius, double child_radius) {
    if (!(parent_radius > 0.0) || !(child_radius > 0.0))
        throw ValidationError("nc_lower_bound: radii must be positive");
    return static_cast<int>(std::ceil(kPi * parent_radius / child_radius));
}

WheelProfile wheel_profile(const WheelSpec& wheel) {
    const int n_lb = nc_lower_bound(wheel.parent_radius, wheel.child_radius);
    if (wheel.child_count < n_lb)
        throw DisjointChildCircles("wheel_profile: child_count " + std::to_string(wheel.child_count) +
                                   " < " + std::to_string(n_lb) +
                                   " leaves exposed parent-circle slippage sections");

    const double rp = wheel.parent_radius, rc = wheel.child_radius;
    const double delta = wheel.sector_angle();
    // Outer intersection of two adjacent child circles lies on their bisector
    // at distance xv from the wheel centre.
    const double half_chord = rp * std::sin(delta / 2.0);
    const double xv = rp * std::cos(delta / 2.0) + std::sqrt(rc * rc - half_chord * half_chord);

    // Arc half-angle as seen from a child centre: vertex direction relative
    // to the child's outward radial.
    const Vec2 vertex = from_angle(delta / 2.0) * xv;
    const Vec2 child = {rp, 0.0};
    const Vec2 rel = vertex - child;
    const double psi_v = std::atan2(rel.y, rel.x);

    std::vector<ArcSegment> arcs;
    arcs.reserve(wheel.child_count);
    for (int k = 0; k < wheel.child_count; ++k) {
        const double theta = k * delta;
        arcs.push_back({from_angle(theta) * rp, rc, theta - psi_v, theta + psi_v});
    }
    return WheelProfile(std::move(arcs), wheel);
}

// ---------------------------------------------------------------------------
// Control-factor bounds
// ---------------------------------------------------------------------------

RpBounds rp_bounds(double child_radius, double o_max, double riser_min) {
    if (child_radius < 0.0 || !(o_max > 0.0) || !(riser_min > 0.0))
        throw ValidationError("rp_bounds: inputs must be positive (child_radius may be zero)");
    RpBounds b;
    b.rp_min = o_max - child_radius;
    b.rp_max = 3.0 / 8.0 * riser_min - child_radius;
    if (b.rp_min > b.rp_max)
        throw InfeasibleBounds("rp_bounds: lower bound " + fmt(b.rp_min) + " exceeds upper bound " +
                               fmt(b.rp_max));
    return b;
}

// ---------------------------------------------------------------------------
// Overhang moment sign
// ---------------------------------------------------------------------------

MomentSign moment_sign(const OverhangContact& contact) {
    const Vec2 arm = contact.point - contact.axis;
    if (arm.norm() < 1e-9)
        throw DegenerateGeometry("moment_sign: contact point coincides with the module axis");
    const double half_angle = std::atan(contact.friction);
    const Vec2 n = normalized(contact.normal);
    double best = cross(arm, n);
    if (half_angle > 0.0) {
        best = std::max(best, cross(arm, rotated(n, half_angle)));
        best = std::max(best, cross(arm, rotated(n, -half_angle)));
    }
    return best > 0.0 ? MomentSign::CounterClockwise : MomentSign::NonPositive;
}

// ---------------------------------------------------------------------------
// Child-count feasibility against the overhang tip
// ---------------------------------------------------------------------------

namespace {

struct ClosureContext {
    double rp, rc, riser, overhang;
    double delta;
    int p;

    // Tip-contact direction angle psi from the riser closure: the child at
    // phi1 touches the riser plane while the child at phi1 + p*delta touches
    // the tip, which protrudes `overhang` beyond the riser face.
    std::optional<double> psi(double phi1) const {
        const double th2 = phi1 + p * delta;
        const double u = (rp * std::cos(phi1) + rc - overhang - rp * std::cos(th2)) / rc;
        if (std::abs(u) > 1.0) return std::nullopt;
        return std::acos(u);  // tip above the child centre
    }

    // Handoff closure: the previous child's top passes tip height exactly as
    // the tip lands on this child.
    std::optional<double> residual(double phi1) const {
        const auto ps = psi(phi1);
        if (!ps) return std::nullopt;
        const double th2 = phi1 + p * delta;
        return rp * std::sin(th2) + rc * std::sin(*ps) - (rp * std::sin(th2 - delta) + rc);
    }
};

}  // namespace

std::vector<TipContactSolution> solve_tip_contacts(const NcFeasibilityProblem& problem, int n) {
    const double rp = problem.parent_radius, rc = problem.child_radius;
    const double delta = 2.0 * kPi / n;
    std::vector<TipContactSolution> out;

    const double vertex_arg = rp * std::sin(delta / 2.0) / rc;
    if (vertex_arg > 1.0) return out;  // disjoint children; caller screens with nc_lower_bound
    const double psi_v = delta / 2.0 + std::asin(vertex_arg);

    const double riser = problem.stair.riser;
    const double o = problem.stair.overhang;
    const double axis_reach = problem.chain_links * problem.module_length;
    const double axis_y = rp + rc;
    const double eps = problem.tolerance;

    const int p_max = static_cast<int>(std::ceil(n / 4.0));
    for (int p = 1; p <= p_max; ++p) {
        const ClosureContext ctx{rp, rc, riser, o, delta, p};
        const double lo = -delta / 2.0, hi = delta / 2.0;
        std::optional<double> prev_f;
        double prev_x = lo;
        for (int i = 0; i <= problem.grid_points; ++i) {
            const double x = lo + (hi - lo) * i / problem.grid_points;
            const auto f = ctx.residual(x);
            if (f && prev_f && (*f == 0.0 || (*f < 0.0) != (*prev_f < 0.0))) {
                // Deterministic bisection refines the grid cell to the tolerance.
                double a = prev_x, b = x, fa = *prev_f;
                for (int it = 0; it < 200; ++it) {
                    const double m = 0.5 * (a + b);
                    const auto fm = ctx.residual(m);
                    if (!fm) break;
                    if ((*fm < 0.0) == (fa < 0.0)) {
                        a = m;
                        fa = *fm;
                    } else {
                        b = m;
                    }
                }
                const double phi1 = 0.5 * (a + b);
                const auto ps = ctx.psi(phi1);
                if (!ps) {
                    prev_x = x;
                    prev_f = f;
                    continue;
                }
                const double th2 = phi1 + p * delta;
                const double phi2 = th2 - *ps;

                // Equality residuals, relative tolerance.
                const double rhs_iii = rp * std::cos(th2) + rc * std::cos(*ps) + o;
                const double res_iii = std::abs(rp * std::cos(phi1) + rc - rhs_iii);
                const double rhs_v = rp * std::sin(th2) + rc * std::sin(*ps);
                const double res_v = std::abs(rp * std::sin(th2 - delta) + rc - rhs_v);
                const bool ok_eq = res_iii <= eps * std::max(1.0, std::abs(rhs_iii)) &&
                                   res_v <= eps * std::max(1.0, std::abs(rhs_v));

                // Range constraints: no child ahead of the riser-touching one,
                // and the tip on the exposed part of the child arc.
                const bool ok_iv = rp * std::sin(phi1 + delta) <= rp * std::cos(phi1) + 1e-12 &&
                                   rp * std::sin(phi1 - delta) <= rp * std::cos(phi1) + 1e-12;
                const bool ok_vii = phi2 >= -1e-12 && phi2 <= psi_v + 1e-12;

                Vec2 tip{0.0, riser};
                Vec2 wheel_center{o - (rp * std::cos(phi1) + rc), riser - rhs_v};

                // Contact validity: the tip must not penetrate any child circle.
                bool ok_pen = true;
                for (int k = 0; k < n && ok_pen; ++k) {
                    const Vec2 ck = wheel_center + from_angle(phi1 + k * delta) * rp;
                    if ((ck - tip).norm() < rc - 1e-9) ok_pen = false;
                }

                const double dy = wheel_center.y - axis_y;
                const bool ok_reach = axis_reach >= std::abs(dy);

                if (ok_eq && ok_iv && ok_vii && ok_pen && ok_reach) {
                    TipContactSolution s;
                    s.p = p;
                    s.phi1 = phi1;
                    s.phi2 = phi2;
                    s.phi4 = *ps;
                    s.tip = tip;
                    s.wheel_center = wheel_center;
                    s.axis = {wheel_center.x - std::sqrt(axis_reach * axis_reach - dy * dy), axis_y};
                    s.phi3 = std::atan2(tip.y - s.axis.y, tip.x - s.axis.x);
                    s.counter_clockwise = s.phi4 <= s.phi3;
                    out.push_back(s);
                } else if (ok_iv && ok_vii && ok_pen && !ok_reach) {
                    // A critical contact the chain cannot even reach counts as
                    // a jam: record it so the child count is rejected.
                    TipContactSolution s;
                    s.p = p;
                    s.phi1 = phi1;
                    s.phi2 = phi2;
                    s.phi4 = *ps;
                    s.tip = tip;
                    s.wheel_center = wheel_center;
                    s.axis = wheel_center;
                    s.phi3 = -kPi;
                    s.counter_clockwise = false;
                    out.push_back(s);
                }
            }
            prev_x = x;
            prev_f = f;
        }
    }
    return out;
}

bool nc_feasible(const NcFeasibilityProblem& problem, int n) {
    if (n < nc_lower_bound(problem.parent_radius, problem.child_radius)) return false;
    const auto solutions = solve_tip_contacts(problem, n);
    if (std::isinf(problem.stair.friction)) return true;  // moment condition dropped
    // No critical contact means the wheel clears the tip without a jam
    // opportunity; otherwise every contact must fold the module.
    return std::all_of(solutions.begin(), solutions.end(),
                       [](const TipContactSolution& s) { return s.counter_clockwise; });
}

int nc_upper_bound(double parent_radius, double child_radius, const StairSpec& stair,
                   const ModuleGeometry& module, int n_max, int chain_links) {
    stair.validate();
    module.validate();
    NcFeasibilityProblem problem;
    problem.parent_radius = parent_radius;
    problem.child_radius = child_radius;
    problem.stair = stair;
    problem.module_length = module.module_length;
    problem.chain_links = chain_links;

    const int n_lb = nc_lower_bound(parent_radius, child_radius);
    for (int n = n_max; n >= n_lb; --n)
        if (nc_feasible(problem, n)) return n;
    throw NoFeasibleN("nc_upper_bound: no child count in [" + std::to_string(n_lb) + ", " +
                      std::to_string(n_max) + "] clears the overhang");
}

DesignBounds design_bounds(double child_radius, double o_max, double riser_min,
                           const LmBounds& lm_bounds, const StairSpec& stair,
                           const ModuleGeometry& module, double rp_for_nc, int n_max,
                           int chain_links) {
    const RpBounds rp = rp_bounds(child_radius, o_max, riser_min);
    DesignBounds b;
    b.rp_min = rp.rp_min;
    b.rp_max = rp.rp_max;
    b.lm_min = lm_bounds.lm_min;
    b.lm_max = lm_bounds.lm_max;
    b.nc_min = nc_lower_bound(rp_for_nc, child_radius);
    b.nc_max = nc_upper_bound(rp_for_nc, child_radius, stair, module, n_max, chain_links);
    return b;
}

// ---------------------------------------------------------------------------
// Contact construction helpers
// ---------------------------------------------------------------------------

OverhangContact circular_tip_contact(double wheel_radius, const StairSpec& stair,
                                     double module_length, int chain_links) {
    const double R = wheel_radius, o = stair.overhang;
    if (!(R > o))
        throw DegenerateGeometry("circular_tip_contact: wheel radius must exceed the overhang");
    // Wedged between riser plane (x = o, tip at origin-level x = 0) and tip.
    const Vec2 tip{0.0, stair.riser};
    Vec2 center{o - R, stair.riser - std::sqrt(R * R - (R - o) * (R - o))};
    const double dy = center.y - R;
    const double reach = chain_links * module_length;
    if (reach < std::abs(dy))
        throw DegenerateGeometry("circular_tip_contact: chain cannot reach the ground");
    const Vec2 axis{center.x - std::sqrt(reach * reach - dy * dy), R};
    return OverhangContact{tip, normalized(center - tip), axis, stair.friction};
}

OverhangContact contact_from_solution(const TipContactSolution& solution, double friction) {
    // Normal along tip -> child centre: -(cos phi4, sin phi4).
    const Vec2 n = from_angle(solution.phi4) * -1.0;
    return OverhangContact{solution.tip, n, solution.axis, friction};
}

// ---------------------------------------------------------------------------
// Profile export
// ---------------------------------------------------------------------------

void write_profile_svg(const std::string& path, const WheelProfile& profile) {
    std::ostringstream body;
    const auto& arcs = profile.arcs();
    const double r = profile.spec().outer_radius();
    const double margin = 2.0;

    // SVG y grows downward: emit flipped y, so mathematically CCW arcs use
    // sweep flag 0.
    const Vec2 first = arcs.front().center + from_angle(arcs.front().start_angle) * arcs.front().radius;
    body << "M " << fmt(first.x) << " " << fmt(-first.y);
    for (const ArcSegment& a : arcs) {
        const Vec2 end = a.center + from_angle(a.end_angle) * a.radius;
        const int large = (a.end_angle - a.start_angle) > kPi ? 1 : 0;
        body << " A " << fmt(a.radius) << " " << fmt(a.radius) << " 0 " << large << " 0 "
             << fmt(end.x) << " " << fmt(-end.y);
    }
    body << " Z";

    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    const double lo = -(r + margin), size = 2.0 * (r + margin);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt(lo) << " " << fmt(lo) << " "
        << fmt(size) << " " << fmt(size) << "\" width=\"" << fmt(size) << "mm\" height=\"" << fmt(size)
        << "mm\">\n";
    out << "  <!-- arc-blended wheel: r_p=" << fmt(profile.spec().parent_radius)
        << " r_c=" << fmt(profile.spec().child_radius) << " n_c=" << profile.spec().child_count
        << ", units mm -->\n";
    out << "  <path d=\"" << body.str() << "\" fill=\"none\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
    out << "</svg>\n";
    if (!out) throw IoError("write failed: " + path);
}

void write_profile_csv(const std::string& path, const WheelProfile& profile, double step_deg) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "x_mm,y_mm\n";
    for (const Vec2& p : profile.sample(step_deg)) out << fmt(p.x) << "," << fmt(p.y) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace stairwheel
