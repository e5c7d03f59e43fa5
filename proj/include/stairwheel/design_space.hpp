#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stairwheel/geometry.hpp"

namespace stairwheel {

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

// Arc-blended wheel: a parent circle of radius parent_radius carries
// child_count evenly spaced child circles of radius child_radius whose outer
// arcs form the wheel periphery.
struct WheelSpec {
    double parent_radius = 0.0;  // r_p, mm
    double child_radius = 0.0;   // r_c, mm
    int child_count = 0;         // n_c

    WheelSpec(double rp, double rc, int nc);

    double sector_angle() const { return 2.0 * kPi / child_count; }  // delta
    double outer_radius() const { return parent_radius + child_radius; }
};

struct StairSpec {
    double riser = 0.0;     // mm
    double tread = 0.0;     // mm
    double overhang = 0.0;  // nosing protrusion beyond the riser face, mm
    double friction = 0.0;  // coefficient at the wheel contact

    void validate(std::optional<double> overhang_limit = std::nullopt) const;
};

struct ModuleGeometry {
    double module_length = 0.0;  // l_m, axle-to-axle, mm
    double clearance = 100.0;    // ground clearance under the link, mm

    // Torsion-spring constants at the two joints, N*mm/deg. The + value
    // opposes counter-clockwise folding, the - value clockwise.
    double k1_ccw = 74.47;
    double k1_cw = 67.56;
    double k2_ccw = 48.89;
    double k2_cw = 57.61;

    void validate() const;
};

struct DesignBounds {
    double rp_min = 0.0, rp_max = 0.0;  // mm
    double lm_min = 0.0, lm_max = 0.0;  // mm
    int nc_min = 0, nc_max = 0;
};

// One circular-arc segment of a wheel boundary. Angles are global (about the
// wheel centre frame's x axis) and the arc runs counter-clockwise from
// start_angle to end_angle around `center`.
struct ArcSegment {
    Vec2 center;
    double radius = 0.0;
    double start_angle = 0.0;
    double end_angle = 0.0;
};

// Closed outer boundary of an arc-blended wheel: child_count arcs, one per
// angular sector of width 2*pi/child_count, consecutive arcs meeting at the
// outer child-circle intersection points.
class WheelProfile {
public:
    WheelProfile(std::vector<ArcSegment> arcs, WheelSpec spec);

    const std::vector<ArcSegment>& arcs() const { return arcs_; }
    const WheelSpec& spec() const { return spec_; }
    double angular_period() const { return spec_.sector_angle(); }

    // Junction points between consecutive arcs, in boundary order.
    std::vector<Vec2> vertices() const;

    // Distance from the wheel centre to the boundary along direction `angle`.
    double boundary_radius(double angle) const;

    // Boundary polyline sampled every step_deg degrees of centre angle.
    std::vector<Vec2> sample(double step_deg = 0.1) const;

private:
    std::vector<ArcSegment> arcs_;
    WheelSpec spec_;
};

// A single contact between the wheel and the lower tip of a stair overhang.
// `normal` is unit length and points into the wheel (the direction along
// which the tip pushes); `axis` is the folding axis of the climbing module.
struct OverhangContact {
    Vec2 point;
    Vec2 normal;
    Vec2 axis;
    double friction = 0.0;
};

enum class MomentSign {
    CounterClockwise,  // some admissible contact force folds the module: climbable
    NonPositive,       // every admissible force resists folding: jam
};

// Feasibility model for the number of child circles against an overhang.
//
// Scene, in the frame of the stair being climbed (tip of the overhang at
// (0, riser), ground at y = 0):
//   - the climbing wheel presses a child circle against the riser face
//     (plane x = overhang) while another child circle, p sectors further
//     counter-clockwise, touches the overhang tip;
//   - the closure picks the critical roll phase phi1 at which the tip meets
//     that child exactly as the previous child's top passes tip height;
//   - the folding axis of the climbing assembly is the axle of the trailing
//     wheel still on the ground, chain_links module lengths behind the
//     climbing wheel along the taut chain, resting at centre height
//     parent_radius + child_radius.
//
// Angles of a solution: phi1 is the riser-touching child's angle from
// horizontal; phi2 the angle at the tip-touching child between its radial
// direction and the tip; phi3 the elevation of the tip seen from the axis
// wheel's centre; phi4 the angle of the tip's normal reaction below the
// backward horizontal. The contact force folds the module counter-clockwise
// iff phi4 <= phi3.
struct NcFeasibilityProblem {
    double parent_radius = 0.0;
    double child_radius = 0.0;
    StairSpec stair;
    double module_length = 0.0;
    int chain_links = 2;
    double tolerance = 1e-6;  // relative tolerance on the closure equalities
    int grid_points = 1000;   // phi1 scan resolution per p
};

// One root of the tip-contact closure for a given child count.
struct TipContactSolution {
    int p = 0;
    double phi1 = 0.0;
    double phi2 = 0.0;
    double phi3 = 0.0;
    double phi4 = 0.0;
    Vec2 wheel_center;
    Vec2 tip;
    Vec2 axis;
    bool counter_clockwise = false;  // phi4 <= phi3
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// Peak-to-trough oscillation of the wheel-centre height while rolling on
// flat ground: r_p * (1 - cos(pi / n_c)).
double transverse_amplitude(const WheelSpec& wheel);

// Oscillations per wheel revolution: one per child circle.
int transverse_frequency(const WheelSpec& wheel);

// Wheel-centre height above flat ground at the given roll angle, contact on
// a child arc. The roll angle is reduced into the supporting child's sector
// [-pi/n_c, pi/n_c].
double rolling_height(const WheelSpec& wheel, double roll_angle);

// Outer envelope of the child circles. Throws DisjointChildCircles when
// child_count < nc_lower_bound (exposed parent-circle slippage sections).
WheelProfile wheel_profile(const WheelSpec& wheel);

struct RpBounds {
    double rp_min = 0.0;
    double rp_max = 0.0;
};

// Parent-radius range from the overhang reach and wheel-size constraints:
//   rp_min = o_max - r_c          (outer radius at least the overhang)
//   rp_max = 3/8 * riser_min - r_c (wheel diameter under 3/4 of the riser)
RpBounds rp_bounds(double child_radius, double o_max, double riser_min);

// Smallest child count that leaves no exposed parent-circle section:
// ceil(pi * r_p / r_c).
int nc_lower_bound(double parent_radius, double child_radius);

// Whether any contact force inside the friction cone (half-angle
// atan(friction) about the normal) produces a counter-clockwise moment about
// the module axis. Moment is linear in the force, so the cone's two boundary
// rays and the normal ray decide the sign.
MomentSign moment_sign(const OverhangContact& contact);

// All physical roots of the tip-contact closure for child count n.
std::vector<TipContactSolution> solve_tip_contacts(const NcFeasibilityProblem& problem, int n);

// A child count is feasible when every critical tip contact folds the module
// counter-clockwise (vacuously feasible when the wheel clears the tip without
// ever reaching the critical configuration). An infinite friction coefficient
// drops the moment condition entirely.
bool nc_feasible(const NcFeasibilityProblem& problem, int n);

// Largest feasible child count in [nc_lower_bound, n_max].
// Throws NoFeasibleN when the whole range is jam-prone.
int nc_upper_bound(double parent_radius, double child_radius, const StairSpec& stair,
                   const ModuleGeometry& module, int n_max = 60, int chain_links = 2);

struct LmBounds {
    double lm_min = 0.0;
    double lm_max = 0.0;
};

// Assembles the full control-factor bounds record. rp_for_nc is the parent
// radius at which both child-count bounds are evaluated (the largest level a
// design intends to use; it need not equal rp_max).
DesignBounds design_bounds(double child_radius, double o_max, double riser_min,
                           const LmBounds& lm_bounds, const StairSpec& stair,
                           const ModuleGeometry& module, double rp_for_nc,
                           int n_max = 60, int chain_links = 2);

// ---------------------------------------------------------------------------
// Contact construction helpers (the circular-vs-arc-wheel comparison)
// ---------------------------------------------------------------------------

// Circular wheel of the given radius wedged between the riser face and the
// overhang tip; the normal passes through the wheel centre.
OverhangContact circular_tip_contact(double wheel_radius, const StairSpec& stair,
                                     double module_length, int chain_links = 2);

// Contact record for one tip-contact closure solution; the normal passes
// through the touching child circle's centre.
OverhangContact contact_from_solution(const TipContactSolution& solution, double friction);

// ---------------------------------------------------------------------------
// Profile export
// ---------------------------------------------------------------------------

// Closed path of circular-arc segments, one path per wheel, units mm.
void write_profile_svg(const std::string& path, const WheelProfile& profile);

// Sampled boundary polyline, header "x_mm,y_mm", six decimals.
void write_profile_csv(const std::string& path, const WheelProfile& profile,
                       double step_deg = 0.1);

}  // namespace stairwheel
