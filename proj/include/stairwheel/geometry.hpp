#pragma once

#include <cmath>

namespace stairwheel {

inline constexpr double kPi = 3.14159265358979323846;

// Plain 2D vector, millimetres throughout. x points in the direction of
// travel, y up; positive angles and moments are counter-clockwise.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }

    double norm() const { return std::hypot(x, y); }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

// z-component of a x b; positive means b is counter-clockwise of a.
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

inline Vec2 from_angle(double theta) { return {std::cos(theta), std::sin(theta)}; }

inline Vec2 rotated(Vec2 v, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

inline Vec2 normalized(Vec2 v) {
    const double n = v.norm();
    return n > 0.0 ? v / n : Vec2{0.0, 0.0};
}

}  // namespace stairwheel
