#include <doctest.h>

#include <cmath>

#include "srb/curve.hpp"
#include "srb/error.hpp"

using namespace srb;

namespace {

double factorial(int k) {
    double f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

// Taylor polynomial of 0.1 + 0.3 (cos(pi s / 2), sin(pi s / 2)) of the given degree
RegularCurve quarter_arc(int degree) {
    Polynomial x, y;
    x.c.assign(degree + 1, 0.0);
    y.c.assign(degree + 1, 0.0);
    const double w = kPi / 2;
    for (int k = 0; k <= degree; ++k) {
        const double t = 0.3 * std::pow(w, k) / factorial(k);
        const int phase = k % 4;
        x.c[k] = phase == 0 ? t : phase == 2 ? -t : 0.0;
        y.c[k] = phase == 1 ? t : phase == 3 ? -t : 0.0;
    }
    x.c[0] += 0.1;
    y.c[0] += 0.1;
    return RegularCurve(x, y);
}

}  // namespace

TEST_CASE("polynomial evaluation, derivatives and affine composition") {
    const Polynomial p{{1.0, -2.0, 0.5, 3.0}};
    CHECK(p.eval(0.5) == doctest::Approx(1.0 - 1.0 + 0.125 + 0.375));
    CHECK(p.derivative(0.5, 1) == doctest::Approx(-2.0 + 0.5 + 2.25));
    CHECK(p.derivative(0.5, 2) == doctest::Approx(1.0 + 9.0));
    CHECK(p.derivative(0.5, 3) == doctest::Approx(18.0));
    CHECK(p.derivative(0.5, 4) == 0.0);
    const auto q = p.compose_affine(0.25, 0.5);
    for (double s : {0.0, 0.3, 1.0}) CHECK(q.eval(s) == doctest::Approx(p.eval(0.25 + 0.5 * s)).epsilon(1e-14));
}

TEST_CASE("regularity and injectivity checks") {
    CHECK_THROWS_AS(RegularCurve(Polynomial{{0.1}}, Polynomial{{0.2}}), PreconditionError);
    // (s^2, 0) has zero speed at s = 0
    CHECK_THROWS_AS(RegularCurve(Polynomial{{0.0, 0.0, 1.0}}, Polynomial{{0.0}}), PreconditionError);
    // wraps around the torus onto itself
    CHECK_THROWS_AS(RegularCurve::segment({0.1, 0.1}, 0.0, 2.0), PreconditionError);
    CHECK_NOTHROW(RegularCurve::segment({0.1, 0.1}, 0.3, 0.5));
}

TEST_CASE("canonical lift") {
    const auto seg = RegularCurve::segment({0.2, 0.3}, 0.7, 0.4);
    const auto l = lift(seg);
    for (double s : {0.0, 0.25, 0.5, 1.0}) CHECK(l.theta(s) == doctest::Approx(0.7).epsilon(1e-14));
    const auto arc = lift(quarter_arc(16));
    CHECK(arc.theta(1.0) - arc.theta(0.0) == doctest::Approx(kPi / 2).epsilon(1e-8));
    const auto rev = lift(quarter_arc(16).reversed());
    for (double s : {0.1, 0.4, 0.9})
        CHECK(std::abs(angle_delta(rev.theta(1.0 - s), arc.theta(s))) < 1e-10);
    const auto xi = seg.lifted_point(0.5);
    CHECK(xi.dir.theta == doctest::Approx(0.7));
}

TEST_CASE("size of straight segments and chain-rule scaling") {
    const auto seg = RegularCurve::segment({0.2, 0.3}, 0.7, 0.4);
    const auto s = cr_size(seg, 6);
    CHECK(s.eps == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(s.eps_hat == 0.0);
    const Polynomial x{{0.1, 0.3, -0.2, 0.15}}, y{{0.2, 0.1, 0.25, -0.05}};
    const RegularCurve c(x, y);
    const auto full = cr_size(c, 4);
    for (int d = 1; d <= 3; ++d) {
        const double b = std::ldexp(1.0, -d);
        const auto sub = cr_size(c.reparametrized(0.0, b), 4);
        // sup over [0, b] is at most the full sup, scaled by b^k
        for (int k = 1; k <= 4; ++k) CHECK(sub.base_norms[k - 1] <= std::pow(b, k) * full.base_norms[k - 1] * (1 + 1e-12));
    }
    // the top-order derivative of a cubic is constant, so the scaling is exact there
    const auto half = cr_size(c.reparametrized(0.25, 0.5), 4);
    CHECK(half.base_norms[2] == doctest::Approx(full.base_norms[2] / 8).epsilon(1e-13));
}

TEST_CASE("size of (s, s^2/10) against closed-form derivatives of atan(0.2 s)") {
    const RegularCurve c(Polynomial{{0.0, 1.0}}, Polynomial{{0.0, 0.0, 0.1}});
    const int r = 4;
    const auto sz = cr_size(c, r);
    double d1 = 0, d2 = 0, d3 = 0, speed = 0;
    for (int i = 0; i < kCurveGrid; ++i) {
        const double s = double(i) / (kCurveGrid - 1), q = 1 + 0.04 * s * s;
        speed = std::max(speed, std::hypot(1.0, 0.2 * s));
        d1 = std::max(d1, 0.2 / q);
        d2 = std::max(d2, std::abs(0.016 * s / (q * q)));
        d3 = std::max(d3, std::abs(0.016 * (1 - 0.12 * s * s) / (q * q * q)));
    }
    CHECK(sz.eps == doctest::Approx(std::max(speed, 0.2)).epsilon(1e-14));
    CHECK(sz.base_norms[1] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(sz.base_norms[2] == 0.0);
    REQUIRE(sz.lift_norms.size() == 3);
    CHECK(sz.lift_norms[0] == doctest::Approx(d1).epsilon(1e-13));
    CHECK(sz.lift_norms[1] == doctest::Approx(d2).epsilon(1e-13));
    CHECK(sz.lift_norms[2] == doctest::Approx(d3).epsilon(1e-13));
    CHECK(sz.eps_hat == doctest::Approx(std::max({d1, d2, d3})).epsilon(1e-13));
}

TEST_CASE("image sizes under linear maps and jet limits") {
    const auto seg = RegularCurve::segment({0.2, 0.3}, 0.0, 0.1);
    // cat map sends (1,0) to (2,1)
    const auto s = cr_size_image(SurfaceMap::cat(), seg, 0.0, 1.0, 1, 4);
    CHECK(s.eps == doctest::Approx(0.1 * std::sqrt(5.0)).epsilon(1e-13));
    CHECK(s.eps_hat == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS_AS(cr_size_image(SurfaceMap::cat(), seg, 0.0, 1.0, 1, kMaxOrder + 1), PreconditionError);
    // nonlinear: order-1 norm equals |Df sigma'| computed directly
    const auto f = SurfaceMap::standard(1.2);
    Taylor X, Y;
    image_series(f, seg, 0.0, 1.0, 0.5, 1, 3, X, Y);
    const auto J = f.jacobian(0.25, 0.3);
    const auto w = J.apply(0.1, 0.0);
    CHECK(std::hypot(X.c[1], Y.c[1]) == doctest::Approx(std::hypot(w[0], w[1])).epsilon(1e-13));
}

TEST_CASE("transverse curve selection") {
    const auto cat = select_transverse_curve(SurfaceMap::cat(), 64, 10);
    CHECK(cat.fraction == 1.0);
    const auto stable_theta = wrap_angle(std::atan2(-(std::sqrt(5.0) + 1.0) / 2.0, 1.0));
    for (double fr : cat.fractions) CHECK(fr == 1.0);  // no tested direction is the stable one
    CHECK(std::abs(angle_delta(cat.theta, stable_theta)) > 0.1);
    const auto id = select_transverse_curve(SurfaceMap::identity(), 32, 10);
    CHECK(id.fraction == 0.0);
    for (double fr : id.fractions) CHECK(fr == 0.0);
    // regression record for K = 1.2
    const auto st = select_transverse_curve(SurfaceMap::standard(1.2), 256, 20, 0.25);
    CHECK(st.fraction == 1.0);
    CHECK(st.theta == doctest::Approx(kPi / 8));
    CHECK(st.offset.u == 0.0625);
    CHECK(st.offset.v == 0.0625);
}
