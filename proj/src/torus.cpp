#include "srb/torus.hpp"

#include <algorithm>

namespace srb {

double wrap_unit(double x) {
    double r = x - std::floor(x);
    // x slightly below an integer can round to exactly 1.0
    return r >= 1.0 ? 0.0 : r;
}

double wrap_angle(double theta) {
    double r = theta - kPi * std::floor(theta / kPi);
    if (r >= kPi || r < 0.0) r = 0.0;
    return r;
}

double torus_delta(double a, double b) {
    double d = a - b;
    return d - std::floor(d + 0.5);
}

double angle_delta(double a, double b) {
    double d = (a - b) / kPi;
    return kPi * (d - std::floor(d + 0.5));
}

double torus_distance(const SurfacePoint& a, const SurfacePoint& b) {
    return std::hypot(torus_delta(a.u, b.u), torus_delta(a.v, b.v));
}

double projective_distance(const ProjectivePoint& a, const ProjectivePoint& b) {
    const double du = torus_delta(a.base.u, b.base.u);
    const double dv = torus_delta(a.base.v, b.base.v);
    const double dt = angle_delta(a.dir.theta, b.dir.theta);
    return std::sqrt(du * du + dv * dv + dt * dt);
}

double Mat2::max_abs() const {
    return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
}

std::array<double, 2> singular_values(const Mat2& m) {
    const double p = std::hypot(m.a + m.d, m.c - m.b);
    const double q = std::hypot(m.a - m.d, m.b + m.c);
    return {0.5 * (p + q), 0.5 * std::abs(p - q)};
}

}  // namespace srb
