#include "srb/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "srb/error.hpp"
#include "srb/kernels.hpp"

namespace srb {

SurfacePoint apply(const SurfaceMap& f, const SurfacePoint& x) { return f.apply(x); }

Mat2 differential(const SurfaceMap& f, const SurfacePoint& x) {
    const Mat2 J = f.jacobian(x.u, x.v);
    if (std::abs(J.det()) < 1e-12) throw ModelError(f.name() + ": singular differential");
    return J;
}

ProjectivePoint projective_step(const SurfaceMap& f, const ProjectivePoint& xi, double& phi_out) {
    const Mat2 J = f.jacobian(xi.base.u, xi.base.v);
    const auto e = xi.dir.unit();
    const auto w = J.apply(e[0], e[1]);
    phi_out = std::log(std::hypot(w[0], w[1]));
    return {f.apply(xi.base), {line_angle(w[0], w[1])}};
}

ProjectivePoint projective_apply(const SurfaceMap& f, const ProjectivePoint& xi) {
    double unused = 0.0;
    return projective_step(f, xi, unused);
}

double phi(const SurfaceMap& f, const ProjectivePoint& xi) {
    double value = 0.0;
    projective_step(f, xi, value);
    return value;
}

namespace {

struct QR2 {
    Mat2 q;
    Mat2 r;
};

QR2 qr(const Mat2& w) {
    const double r00 = std::hypot(w.a, w.c);
    const double q0x = w.a / r00, q0y = w.c / r00;
    const double r01 = q0x * w.b + q0y * w.d;
    const double x1 = w.b - r01 * q0x, y1 = w.d - r01 * q0y;
    const double r11 = std::hypot(x1, y1);
    return {{q0x, x1 / r11, q0y, y1 / r11}, {r00, r01, 0.0, r11}};
}

}  // namespace

double upper_lyapunov(const SurfaceMap& f, const SurfacePoint& x0, int n) {
    if (n < 1) throw PreconditionError("upper_lyapunov: n must be >= 1");
    constexpr int kBlock = 16;
    Mat2 W = Mat2::identity();
    Mat2 R = Mat2::identity();
    double log_scale = 0.0;
    SurfacePoint x = x0;
    for (int i = 0; i < n; ++i) {
        W = f.jacobian(x.u, x.v) * W;
        x = f.apply(x);
        if ((i + 1) % kBlock == 0 || i + 1 == n) {
            const QR2 d = qr(W);
            W = d.q;
            R = d.r * R;
            const double s = R.max_abs();
            R = R.scaled(1.0 / s);
            log_scale += std::log(s);
        }
    }
    return (log_scale + std::log(operator_norm(R))) / n;
}

std::array<double, 9> projective_differential(const SurfaceMap& f, const ProjectivePoint& xi) {
    Jet jet;
    f.jet(xi.base.u, xi.base.v, 2, jet);
    const Mat2 J = jet.jacobian();
    const double c = std::cos(xi.dir.theta), s = std::sin(xi.dir.theta);
    const double w0 = J.a * c + J.b * s;
    const double w1 = J.c * c + J.d * s;
    const double nn = w0 * w0 + w1 * w1;
    // dw/du, dw/dv from second derivatives; dw/dtheta = J e_perp
    const double du0 = jet.d[2][0][2] * c + jet.d[2][0][1] * s;
    const double du1 = jet.d[2][1][2] * c + jet.d[2][1][1] * s;
    const double dv0 = jet.d[2][0][1] * c + jet.d[2][0][0] * s;
    const double dv1 = jet.d[2][1][1] * c + jet.d[2][1][0] * s;
    const double dt0 = -J.a * s + J.b * c;
    const double dt1 = -J.c * s + J.d * c;
    auto dtheta = [&](double d0, double d1) { return (w0 * d1 - w1 * d0) / nn; };
    return {J.a, J.b, 0.0, J.c, J.d, 0.0, dtheta(du0, du1), dtheta(dv0, dv1), dtheta(dt0, dt1)};
}

namespace {

double sym3_max_eigenvalue(double a, double b, double c, double d, double e, double g) {
    // symmetric [[a,d,e],[d,b,g],[e,g,c]]
    const double p1 = d * d + e * e + g * g;
    if (p1 == 0.0) return std::max({a, b, c});
    const double q = (a + b + c) / 3.0;
    const double p2 = (a - q) * (a - q) + (b - q) * (b - q) + (c - q) * (c - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    const double ba = (a - q) / p, bb = (b - q) / p, bc = (c - q) / p, bd = d / p, be = e / p,
                 bg = g / p;
    const double det = ba * (bb * bc - bg * bg) - bd * (bd * bc - bg * be) + be * (bd * bg - bb * be);
    const double r = std::clamp(det / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    return q + 2.0 * p * std::cos(phi);
}

std::array<double, 9> mul3(const std::array<double, 9>& x, const std::array<double, 9>& y) {
    std::array<double, 9> z{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += x[3 * i + k] * y[3 * k + j];
            z[3 * i + j] = s;
        }
    return z;
}

}  // namespace

double operator_norm3(const std::array<double, 9>& m) {
    double g[6] = {0, 0, 0, 0, 0, 0};  // MtM entries: 00,11,22,01,02,12
    for (int k = 0; k < 3; ++k) {
        const double x = m[3 * k], y = m[3 * k + 1], z = m[3 * k + 2];
        g[0] += x * x;
        g[1] += y * y;
        g[2] += z * z;
        g[3] += x * y;
        g[4] += x * z;
        g[5] += y * z;
    }
    return std::sqrt(std::max(0.0, sym3_max_eigenvalue(g[0], g[1], g[2], g[3], g[4], g[5])));
}

double log_projective_norm(const SurfaceMap& f, const ProjectivePoint& xi0, int n) {
    std::array<double, 9> P = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    double log_scale = 0.0;
    ProjectivePoint xi = xi0;
    for (int i = 0; i < n; ++i) {
        P = mul3(projective_differential(f, xi), P);
        xi = projective_apply(f, xi);
        double s = 0.0;
        for (double v : P) s = std::max(s, std::abs(v));
        for (double& v : P) v /= s;
        log_scale += std::log(s);
    }
    return log_scale + std::log(operator_norm3(P));
}

double asymptotic_dilation(const SurfaceMap& f, int n, const DilationGrid& grid) {
    if (n < 1) throw PreconditionError("asymptotic_dilation: n must be >= 1");
    return kernels::max_log_projective_norm(f, n, grid) / n;
}

double phi_sup(const SurfaceMap& f, int grid) {
    double best = 0.0;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const auto sv = singular_values(f.jacobian(double(i) / grid, double(j) / grid));
            best = std::max({best, std::abs(std::log(sv[0])), std::abs(std::log(sv[1]))});
        }
    return best;
}

ProjectiveOrbit projective_orbit(const SurfaceMap& f, const ProjectivePoint& xi0, int n) {
    ProjectiveOrbit orbit;
    orbit.points.reserve(n);
    orbit.phi.reserve(n);
    ProjectivePoint xi = xi0;
    for (int i = 0; i < n; ++i) {
        double p = 0.0;
        orbit.points.push_back(xi);
        xi = projective_step(f, xi, p);
        orbit.phi.push_back(p);
    }
    return orbit;
}

}  // namespace srb
