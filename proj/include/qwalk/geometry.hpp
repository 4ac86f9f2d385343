#pragma once

#include <cmath>

namespace qwalk {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    [[nodiscard]] double norm() const { return std::hypot(x, y); }
    [[nodiscard]] bool finite() const { return std::isfinite(x) && std::isfinite(y); }

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double c, Vec2 a) { return {c * a.x, c * a.y}; }
    friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

// Row-major 2x2 matrix [[a11, a12], [a21, a22]].
struct Mat2 {
    double a11 = 0.0;
    double a12 = 0.0;
    double a21 = 0.0;
    double a22 = 0.0;

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    [[nodiscard]] double det() const { return a11 * a22 - a12 * a21; }
    [[nodiscard]] double trace() const { return a11 + a22; }
    [[nodiscard]] Mat2 transpose() const { return {a11, a21, a12, a22}; }
    [[nodiscard]] bool finite() const {
        return std::isfinite(a11) && std::isfinite(a12) && std::isfinite(a21) && std::isfinite(a22);
    }
    [[nodiscard]] Mat2 inverse() const {
        const double d = det();
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }

    friend Vec2 operator*(const Mat2& m, Vec2 v) { return {m.a11 * v.x + m.a12 * v.y, m.a21 * v.x + m.a22 * v.y}; }
    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
                a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
    }
    friend Mat2 operator*(double c, const Mat2& m) { return {c * m.a11, c * m.a12, c * m.a21, c * m.a22}; }
    friend bool operator==(const Mat2&, const Mat2&) = default;
};

inline double max_abs_diff(const Mat2& a, const Mat2& b) {
    return std::fmax(std::fmax(std::fabs(a.a11 - b.a11), std::fabs(a.a12 - b.a12)),
                     std::fmax(std::fabs(a.a21 - b.a21), std::fabs(a.a22 - b.a22)));
}

// Anticlockwise rotation by theta.
inline Vec2 rotate(Vec2 v, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {v.x * c - v.y * s, v.x * s + v.y * c};
}

// Oriented angle theta in (-pi, pi] with rotate(w, theta)/|w| = z/|z|.
inline double oriented_angle(Vec2 w, Vec2 z) { return std::atan2(cross(w, z), dot(w, z)); }

}  // namespace qwalk
