#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace dlo {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

    double norm() const { return std::hypot(x, y); }
    double norm_sq() const { return x * x + y * y; }

    // Zero vector stays zero.
    Vec2 unit() const {
        double n = norm();
        return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
    }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

/// Signed angle rotating `from` onto `to`, in (-pi, pi].
inline double signed_angle(const Vec2& from, const Vec2& to) {
    return std::atan2(cross(from, to), dot(from, to));
}

/// Unsigned angle between two vectors, in [0, pi].
inline double angle_between(const Vec2& a, const Vec2& b) {
    double na = a.norm(), nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    double c = std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
    return std::acos(c);
}

inline Vec2 rotate(const Vec2& v, double angle) {
    double c = std::cos(angle), s = std::sin(angle);
    return {v.x * c - v.y * s, v.x * s + v.y * c};
}

/// Distance from point p to segment [a, b].
inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 ab = b - a;
    double len_sq = ab.norm_sq();
    if (len_sq == 0.0) return (p - a).norm();
    double t = std::clamp(dot(p - a, ab) / len_sq, 0.0, 1.0);
    return (p - (a + ab * t)).norm();
}

/// Integer pixel coordinate, x right, y down.
struct PixelCoord {
    int x = 0;
    int y = 0;

    bool operator==(const PixelCoord&) const = default;
    auto operator<=>(const PixelCoord&) const = default;

    Vec2 to_vec() const { return {static_cast<double>(x), static_cast<double>(y)}; }
};

inline bool pixels_adjacent8(const PixelCoord& a, const PixelCoord& b) {
    return std::abs(a.x - b.x) <= 1 && std::abs(a.y - b.y) <= 1;
}

}  // namespace dlo
