#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace airforge {

inline constexpr double kPi = 3.14159265358979323846;

inline double radians(double deg) { return deg * (kPi / 180.0); }
inline double degrees(double rad) { return rad * (180.0 / kPi); }

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2 &o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2 &o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2 &o) const { return x == o.x && y == o.y; }
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}
    explicit Vec3(double s) : x(s), y(s), z(s) {}

    Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator*(const Vec3 &o) const { return {x * o.x, y * o.y, z * o.z}; }

    Vec3 &operator+=(const Vec3 &o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    Vec3 &operator*=(const Vec3 &o) {
        x *= o.x;
        y *= o.y;
        z *= o.z;
        return *this;
    }
    Vec3 &operator*=(double s) {
        x *= s;
        y *= s;
        z *= s;
        return *this;
    }

    bool operator==(const Vec3 &o) const { return x == o.x && y == o.y && z == o.z; }

    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    double max_component() const { return std::max(x, std::max(y, z)); }
    double min_component() const { return std::min(x, std::min(y, z)); }
};

inline Vec3 operator*(double s, const Vec3 &v) { return v * s; }

inline double dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3 &a, const Vec3 &b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double length_squared(const Vec3 &v) { return dot(v, v); }
inline double length(const Vec3 &v) { return std::sqrt(dot(v, v)); }

inline Vec3 normalize(const Vec3 &v) {
    double len = length(v);
    return v / len;
}

inline Vec3 min(const Vec3 &a, const Vec3 &b) {
    return {std::min(a.x, b.x), std::min(a.y, b.y), std::min(a.z, b.z)};
}

inline Vec3 max(const Vec3 &a, const Vec3 &b) {
    return {std::max(a.x, b.x), std::max(a.y, b.y), std::max(a.z, b.z)};
}

inline Vec3 lerp(const Vec3 &a, const Vec3 &b, double t) { return a + (b - a) * t; }

inline Vec3 clamp01(const Vec3 &v) {
    return {std::clamp(v.x, 0.0, 1.0), std::clamp(v.y, 0.0, 1.0), std::clamp(v.z, 0.0, 1.0)};
}

inline bool is_finite(const Vec3 &v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

inline Vec3 reflect(const Vec3 &v, const Vec3 &n) { return v - n * (2.0 * dot(v, n)); }

// Column-major 3x3 matrix; columns are the images of the basis vectors.
struct Mat3 {
    std::array<Vec3, 3> col{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};

    static Mat3 identity() { return Mat3{}; }

    static Mat3 from_columns(const Vec3 &c0, const Vec3 &c1, const Vec3 &c2) {
        Mat3 m;
        m.col = {c0, c1, c2};
        return m;
    }

    static Mat3 rotation_y(double angle_rad) {
        double c = std::cos(angle_rad), s = std::sin(angle_rad);
        return from_columns({c, 0, -s}, {0, 1, 0}, {s, 0, c});
    }

    static Mat3 rotation_x(double angle_rad) {
        double c = std::cos(angle_rad), s = std::sin(angle_rad);
        return from_columns({1, 0, 0}, {0, c, s}, {0, -s, c});
    }

    static Mat3 rotation_z(double angle_rad) {
        double c = std::cos(angle_rad), s = std::sin(angle_rad);
        return from_columns({c, s, 0}, {-s, c, 0}, {0, 0, 1});
    }

    Vec3 operator*(const Vec3 &v) const { return col[0] * v.x + col[1] * v.y + col[2] * v.z; }

    Mat3 operator*(const Mat3 &o) const {
        return from_columns(*this * o.col[0], *this * o.col[1], *this * o.col[2]);
    }

    Mat3 transposed() const {
        return from_columns({col[0].x, col[1].x, col[2].x}, {col[0].y, col[1].y, col[2].y},
                            {col[0].z, col[1].z, col[2].z});
    }

    double determinant() const { return dot(col[0], cross(col[1], col[2])); }
};

struct Aabb {
    Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
    Vec3 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity()};

    void grow(const Vec3 &p) {
        lo = min(lo, p);
        hi = max(hi, p);
    }
    void grow(const Aabb &b) {
        lo = min(lo, b.lo);
        hi = max(hi, b.hi);
    }

    bool empty() const { return lo.x > hi.x; }
    Vec3 extent() const { return hi - lo; }
    Vec3 center() const { return (lo + hi) * 0.5; }

    double surface_area() const {
        if (empty()) return 0.0;
        Vec3 e = extent();
        return 2.0 * (e.x * e.y + e.y * e.z + e.z * e.x);
    }

    bool overlaps(const Aabb &o) const {
        return lo.x <= o.hi.x && hi.x >= o.lo.x && lo.y <= o.hi.y && hi.y >= o.lo.y &&
               lo.z <= o.hi.z && hi.z >= o.lo.z;
    }
};

}  // namespace airforge
