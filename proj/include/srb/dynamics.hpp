#pragma once

#include <array>
#include <vector>

#include "srb/surface_map.hpp"
#include "srb/torus.hpp"

namespace srb {

/// Angle of the line spanned by (x, y), in [0, pi).
inline double line_angle(double x, double y) { return wrap_angle(std::atan2(y, x)); }

SurfacePoint apply(const SurfaceMap& f, const SurfacePoint& x);

/// Exact Jacobian; throws ModelError if |det| < 1e-12.
Mat2 differential(const SurfaceMap& f, const SurfacePoint& x);

/// f-hat(x, E) = (f(x), Df(E)).
ProjectivePoint projective_apply(const SurfaceMap& f, const ProjectivePoint& xi);

/// phi(x, E) = log |Df|_E|.
double phi(const SurfaceMap& f, const ProjectivePoint& xi);

/// One step of f-hat that also returns phi at the starting point.
ProjectivePoint projective_step(const SurfaceMap& f, const ProjectivePoint& xi, double& phi_out);

/// (1/n) log |Df^n(x)|, with QR re-orthonormalization every 16 steps.
double upper_lyapunov(const SurfaceMap& f, const SurfacePoint& x, int n);

/// Df-hat at xi in the chart (u, v, theta), row-major 3x3.
std::array<double, 9> projective_differential(const SurfaceMap& f, const ProjectivePoint& xi);

/// Largest singular value of a row-major 3x3 matrix.
double operator_norm3(const std::array<double, 9>& m);

struct DilationGrid {
    int nu = 64;
    int nv = 64;
    int ntheta = 32;
};

/// (1/n) log max over the grid of |Df-hat^n_xi|. Grid points are i/nu, j/nv, k pi/ntheta.
double asymptotic_dilation(const SurfaceMap& f, int n, const DilationGrid& grid = {});

/// log |Df-hat^n_xi| along one orbit, with periodic rescaling.
double log_projective_norm(const SurfaceMap& f, const ProjectivePoint& xi, int n);

/// sup over M-hat of |phi|, from singular values of Df on an n x n grid.
double phi_sup(const SurfaceMap& f, int grid = 128);

/// f-hat orbit of length n (xi, ..., f-hat^{n-1} xi) with phi at every point.
struct ProjectiveOrbit {
    std::vector<ProjectivePoint> points;
    std::vector<double> phi;
};
ProjectiveOrbit projective_orbit(const SurfaceMap& f, const ProjectivePoint& xi, int n);

}  // namespace srb
