#pragma once

#include <array>
#include <vector>

#include "srb/surface_map.hpp"
#include "srb/taylor.hpp"
#include "srb/torus.hpp"

namespace srb {

/// Dense polynomial c[0] + c[1] s + ... in monomial basis.
struct Polynomial {
    std::vector<double> c;

    int degree() const { return c.empty() ? 0 : int(c.size()) - 1; }
    double eval(double s) const;
    /// k-th derivative at s.
    double derivative(double s, int k) const;
    /// p(a + b s).
    Polynomial compose_affine(double a, double b) const;
};

/// Grid size used for every sup-norm of a curve and for the regularity checks.
inline constexpr int kCurveGrid = 1024;

/// Polynomial curve s -> (x(s), y(s)) in the universal cover of T^2, s in [0,1].
///
/// Construction checks regularity (min |sigma'| > 1e-9) and an injectivity proxy (no two
/// non-adjacent grid points closer than 1e-9 on the torus); violations throw PreconditionError.
class RegularCurve {
public:
    RegularCurve(Polynomial x, Polynomial y);

    /// p + s * length * (cos theta, sin theta).
    static RegularCurve segment(const SurfacePoint& p, double theta, double length);

    const Polynomial& x() const { return x_; }
    const Polynomial& y() const { return y_; }
    int degree() const { return std::max(x_.degree(), y_.degree()); }

    SurfacePoint point(double s) const { return SurfacePoint::normalized(x_.eval(s), y_.eval(s)); }
    std::array<double, 2> raw(double s) const { return {x_.eval(s), y_.eval(s)}; }
    std::array<double, 2> derivative(double s, int k = 1) const {
        return {x_.derivative(s, k), y_.derivative(s, k)};
    }
    /// Lift point sigma-hat(s) = (sigma(s), R sigma'(s)).
    ProjectivePoint lifted_point(double s) const;

    /// Taylor coefficients in h of sigma(t + b h) up to degree r: c_k = sigma^(k)(t) b^k / k!.
    void taylor(double t, double b, int r, Taylor& x, Taylor& y) const;

    double min_speed(int grid = kCurveGrid) const;
    RegularCurve reparametrized(double a, double b) const;
    RegularCurve reversed() const { return reparametrized(1.0, -1.0); }

private:
    Polynomial x_;
    Polynomial y_;
};

/// Canonical lift: sigma plus a continuous branch of the tangent angle.
class LiftedCurve {
public:
    explicit LiftedCurve(RegularCurve base);
    const RegularCurve& base() const { return base_; }
    /// Continuous branch of the angle of sigma'(s), chosen with theta(0) in [0, pi).
    double theta(double s) const;

private:
    RegularCurve base_;
    std::vector<double> grid_;
};

LiftedCurve lift(const RegularCurve& curve);

/// Sup-norms of derivatives: eps over orders 1..r of sigma, eps_hat over orders 1..r-1 of the
/// tangent angle of the lift. Per-order values are kept (index k-1).
struct CrSize {
    double eps = 0.0;
    double eps_hat = 0.0;
    std::vector<double> base_norms;
    std::vector<double> lift_norms;

    bool within(double e, double e_hat) const { return eps <= e && eps_hat <= e_hat; }
};

/// Per-order norms at one point from the position series (X, Y) of degree r. `base` receives
/// r entries, `lift` receives r-1 entries.
void size_terms(const Taylor& X, const Taylor& Y, int r, double* base, double* lift);

/// Image series of f^steps o sigma o psi at parameter s, psi(s) = a + b s.
void image_series(const SurfaceMap& f, const RegularCurve& curve, double a, double b, double s,
                  int steps, int r, Taylor& X, Taylor& Y);

CrSize cr_size(const RegularCurve& curve, int r, int grid = kCurveGrid);

/// Size of f^steps o sigma o psi; throws PreconditionError if r exceeds the available jets.
CrSize cr_size_image(const SurfaceMap& f, const RegularCurve& curve, double a, double b, int steps,
                     int r, int grid = kCurveGrid);

}  // namespace srb

namespace srb {

struct TransverseSelection {
    RegularCurve curve;
    double fraction = 0.0;
    double theta = 0.0;
    SurfacePoint offset;
    /// Fraction for every tested segment, offsets major, directions minor.
    std::vector<double> fractions;
};

/// Tests straight segments of the given length in 8 directions (k pi / 8) from 8 fixed offsets,
/// scoring each by the fraction of `samples` midpoint parameters whose finite-horizon tangent
/// exponent is positive. Returns the first best-scoring segment.
TransverseSelection select_transverse_curve(const SurfaceMap& f, int samples, int horizon = 20,
                                            double length = 0.25);

}  // namespace srb
