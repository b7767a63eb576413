#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace srb {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduce to the representative in [0,1).
double wrap_unit(double x);
/// Reduce an angle to the representative in [0,pi).
double wrap_angle(double theta);
/// Signed difference a-b reduced to [-1/2,1/2).
double torus_delta(double a, double b);
/// Signed difference of two line angles reduced to [-pi/2,pi/2).
double angle_delta(double a, double b);

/// A point of T^2 = (R/Z)^2 stored by its representative in [0,1)^2.
struct SurfacePoint {
    double u = 0.0;
    double v = 0.0;

    static SurfacePoint normalized(double u, double v) { return {wrap_unit(u), wrap_unit(v)}; }
    bool operator==(const SurfacePoint&) const = default;
};

/// Line through the origin of the tangent plane, by its angle in [0,pi).
struct TangentDirection {
    double theta = 0.0;

    static TangentDirection normalized(double theta) { return {wrap_angle(theta)}; }
    std::array<double, 2> unit() const { return {std::cos(theta), std::sin(theta)}; }
    bool operator==(const TangentDirection&) const = default;
};

struct ProjectivePoint {
    SurfacePoint base;
    TangentDirection dir;
    bool operator==(const ProjectivePoint&) const = default;
};

/// Flat distance on the torus.
double torus_distance(const SurfacePoint& a, const SurfacePoint& b);

/// Distance on the projective bundle in the flat chart (u,v,theta), theta taken mod pi.
double projective_distance(const ProjectivePoint& a, const ProjectivePoint& b);

/// Row-major 2x2 matrix.
struct Mat2 {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    double det() const { return a * d - b * c; }
    std::array<double, 2> apply(double x, double y) const { return {a * x + b * y, c * x + d * y}; }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 scaled(double s) const { return {a * s, b * s, c * s, d * s}; }
    double max_abs() const;
};

/// Singular values (largest first), closed form.
std::array<double, 2> singular_values(const Mat2& m);
inline double operator_norm(const Mat2& m) { return singular_values(m)[0]; }

}  // namespace srb
