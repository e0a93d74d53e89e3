#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mmc {

// Planar vector, components in segment-length units.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

inline double length(Vec2 v) { return std::hypot(v.x, v.y); }

// Counter-clockwise angle from +x, in [0, 2*pi). Undefined for the zero vector.
inline double angle(Vec2 v) {
    if (v.x == 0.0 && v.y == 0.0)
        throw std::domain_error("angle: zero vector has no orientation");
    double a = std::atan2(v.y, v.x);
    if (a < 0.0) a += 2.0 * std::numbers::pi;
    if (a >= 2.0 * std::numbers::pi) a = 0.0;
    return a;
}

inline Vec2 from_angle(double theta, double len) {
    return {len * std::cos(theta), len * std::sin(theta)};
}

inline Vec2 rotated(Vec2 v, double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

inline double distance(Vec2 a, Vec2 b) { return length(a - b); }

inline bool finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

}  // namespace mmc
