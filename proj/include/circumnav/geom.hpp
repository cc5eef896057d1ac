#pragma once
/**
 * @file geom.hpp
 * @brief Planar geometry primitives: vectors, unit bearings, wrapped angles.
 *
 * Conventions used throughout the library:
 *   - Angles are radians; the canonical representative lives in [0, 2*pi).
 *   - ccw_angle(a, b) is the counterclockwise rotation taking a onto b.
 *   - rotate_cw_quarter rotates a unit vector clockwise by pi/2.
 *   - Bearings between points closer than an epsilon are refused
 *     (DegenerateBearing); the default epsilon is kMinSeparation.
 */

#include "circumnav/errors.hpp"

#include <cmath>

namespace circumnav {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Minimum admissible point separation (meters) before a bearing is
/// considered degenerate. Configurable per scenario; this is the default.
inline constexpr double kMinSeparation = 1e-9;

/// Plain 2D vector, double precision, meters unless stated otherwise.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    friend constexpr Vec2 operator*(double s, const Vec2& v) { return {v.x * s, v.y * s}; }
    Vec2& operator+=(const Vec2& r) { x += r.x; y += r.y; return *this; }
    Vec2& operator-=(const Vec2& r) { x -= r.x; y -= r.y; return *this; }

    constexpr double dot(const Vec2& r) const { return x * r.x + y * r.y; }
    double norm() const { return std::hypot(x, y); }
    constexpr double norm_squared() const { return x * x + y * y; }
    bool is_finite() const { return std::isfinite(x) && std::isfinite(y); }
};

/// 2D cross product (z-component of the 3D cross product).
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

/// Angle with canonical representative in [0, 2*pi). The separation
/// estimator's output range [-pi, 3*pi) is deliberately NOT an Angle; it is
/// a plain double so that error arithmetic never wraps (see control module).
class Angle {
public:
    constexpr Angle() = default;

    /// Canonicalize an arbitrary radian value into [0, 2*pi).
    static Angle wrap(double radians) {
        double r = std::fmod(radians, kTwoPi);
        if (r < 0.0) r += kTwoPi;
        if (r >= kTwoPi) r = 0.0; // fold the rounding boundary back to 0
        return Angle(r);
    }

    constexpr double radians() const { return value_; }

private:
    explicit constexpr Angle(double v) : value_(v) {}
    double value_ = 0.0;
};

/// Principal-value representative in (-pi, pi]; for differencing angle
/// series across the 0/2*pi seam.
inline double wrap_to_pi(double radians) {
    double r = std::fmod(radians, kTwoPi);
    if (r > kPi) r -= kTwoPi;
    if (r <= -kPi) r += kTwoPi;
    return r;
}

/// Unit vector. Construction goes through factories that establish the
/// invariant x^2 + y^2 = 1 (within 1e-12).
class UnitVec2 {
public:
    static UnitVec2 from_angle(double radians) {
        return UnitVec2(std::cos(radians), std::sin(radians));
    }

    /// Validate externally supplied components.
    static UnitVec2 checked(double x, double y) {
        const double nsq = x * x + y * y;
        if (!(std::abs(nsq - 1.0) <= 1e-12))
            throw ConfigError("UnitVec2: components are not on the unit circle");
        return UnitVec2(x, y);
    }

    constexpr double x() const { return x_; }
    constexpr double y() const { return y_; }
    constexpr Vec2 vec() const { return {x_, y_}; }

    /// Polar angle in (-pi, pi].
    double angle() const { return std::atan2(y_, x_); }

private:
    constexpr UnitVec2(double x, double y) : x_(x), y_(y) {}
    double x_ = 1.0;
    double y_ = 0.0;

    friend UnitVec2 unit_bearing(const Vec2&, const Vec2&, double);
    friend constexpr UnitVec2 rotate_cw_quarter(UnitVec2);
};

constexpr double dot(const UnitVec2& a, const UnitVec2& b) {
    return a.x() * b.x() + a.y() * b.y();
}
constexpr double cross(const UnitVec2& a, const UnitVec2& b) {
    return a.x() * b.y() - a.y() * b.x();
}

/// Unit vector pointing from `from` toward `to`.
/// Throws DegenerateBearing when the points are closer than `eps`.
inline UnitVec2 unit_bearing(const Vec2& from, const Vec2& to, double eps = kMinSeparation) {
    if (!from.is_finite() || !to.is_finite())
        throw DegenerateBearing("unit_bearing: non-finite endpoint");
    const Vec2 d = to - from;
    const double dist = d.norm();
    if (!(dist > eps))
        throw DegenerateBearing("unit_bearing: points closer than minimum separation");
    return UnitVec2(d.x / dist, d.y / dist);
}

/// Rotate a unit vector clockwise by pi/2: (x, y) -> (y, -x).
constexpr UnitVec2 rotate_cw_quarter(UnitVec2 v) {
    return UnitVec2(v.y(), -v.x());
}

/// Counterclockwise angle in [0, 2*pi) taking a onto b. Computed from
/// atan2(cross, dot), so it is well behaved near the 0/2*pi seam.
inline Angle ccw_angle(const UnitVec2& a, const UnitVec2& b) {
    return Angle::wrap(std::atan2(cross(a, b), dot(a, b)));
}

} // namespace circumnav
