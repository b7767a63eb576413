#include "srb/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "srb/dynamics.hpp"
#include "srb/error.hpp"

namespace srb {

double Polynomial::eval(double s) const {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * s + *it;
    return v;
}

double Polynomial::derivative(double s, int k) const {
    double v = 0.0;
    for (int j = degree(); j >= k; --j) {
        double coef = c[j];
        for (int m = 0; m < k; ++m) coef *= (j - m);
        v = v * s + coef;
    }
    return v;
}

Polynomial Polynomial::compose_affine(double a, double b) const {
    // Horner in polynomial arithmetic: ((c_n) q + c_{n-1}) q + ... with q = a + b s
    std::vector<double> acc;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        std::vector<double> next(acc.size() + 1, 0.0);
        for (size_t i = 0; i < acc.size(); ++i) {
            next[i] += a * acc[i];
            next[i + 1] += b * acc[i];
        }
        next[0] += *it;
        acc = std::move(next);
    }
    if (acc.empty()) acc.push_back(0.0);
    return {acc};
}

namespace {

void check_regular(const Polynomial& x, const Polynomial& y) {
    const int n = kCurveGrid;
    std::vector<double> us(n), vs(n);
    for (int i = 0; i < n; ++i) {
        const double s = double(i) / (n - 1);
        const double sp = std::hypot(x.derivative(s, 1), y.derivative(s, 1));
        if (!(sp > 1e-9)) throw PreconditionError("curve is not regular: sigma' vanishes");
        us[i] = wrap_unit(x.eval(s));
        vs[i] = wrap_unit(y.eval(s));
    }
    // injectivity proxy: sort by u and compare neighbours within the tolerance band
    constexpr double tol = 1e-9;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return us[a] < us[b]; });
    for (int p = 0; p < n; ++p) {
        for (int q = p + 1; q < p + n; ++q) {
            const int i = order[p], j = order[q % n];
            if (std::abs(torus_delta(us[i], us[j])) > tol) break;
            if (std::abs(i - j) > 1 && std::abs(torus_delta(vs[i], vs[j])) <= tol)
                throw PreconditionError("curve is not injective on the sampling grid");
        }
    }
}

}  // namespace

RegularCurve::RegularCurve(Polynomial x, Polynomial y) : x_(std::move(x)), y_(std::move(y)) {
    if (x_.c.empty()) x_.c.push_back(0.0);
    if (y_.c.empty()) y_.c.push_back(0.0);
    check_regular(x_, y_);
}

RegularCurve RegularCurve::segment(const SurfacePoint& p, double theta, double length) {
    return RegularCurve({{p.u, length * std::cos(theta)}}, {{p.v, length * std::sin(theta)}});
}

ProjectivePoint RegularCurve::lifted_point(double s) const {
    const auto d = derivative(s, 1);
    return {point(s), {line_angle(d[0], d[1])}};
}

void RegularCurve::taylor(double t, double b, int r, Taylor& X, Taylor& Y) const {
    X.c.fill(0.0);
    Y.c.fill(0.0);
    double scale = 1.0;  // b^k / k!
    const int top = std::min(r, degree());
    X.c[0] = x_.eval(t);
    Y.c[0] = y_.eval(t);
    for (int k = 1; k <= top; ++k) {
        scale *= b / k;
        X.c[k] = x_.derivative(t, k) * scale;
        Y.c[k] = y_.derivative(t, k) * scale;
    }
}

double RegularCurve::min_speed(int grid) const {
    double m = INFINITY;
    for (int i = 0; i < grid; ++i) {
        const auto d = derivative(double(i) / (grid - 1), 1);
        m = std::min(m, std::hypot(d[0], d[1]));
    }
    return m;
}

RegularCurve RegularCurve::reparametrized(double a, double b) const {
    return RegularCurve(x_.compose_affine(a, b), y_.compose_affine(a, b));
}

LiftedCurve::LiftedCurve(RegularCurve base) : base_(std::move(base)), grid_(kCurveGrid) {
    double prev = 0.0;
    for (int i = 0; i < kCurveGrid; ++i) {
        const auto d = base_.derivative(double(i) / (kCurveGrid - 1), 1);
        double th = line_angle(d[0], d[1]);
        if (i > 0) th = prev + angle_delta(th, prev);
        grid_[i] = th;
        prev = th;
    }
}

double LiftedCurve::theta(double s) const {
    const double pos = std::clamp(s, 0.0, 1.0) * (kCurveGrid - 1);
    const int i = std::min(int(pos), kCurveGrid - 2);
    const double guess = grid_[i] + (pos - i) * (grid_[i + 1] - grid_[i]);
    const auto d = base_.derivative(s, 1);
    return guess + angle_delta(line_angle(d[0], d[1]), guess);
}

LiftedCurve lift(const RegularCurve& curve) { return LiftedCurve(curve); }

namespace {

constexpr std::array<double, kMaxOrder + 1> make_factorials() {
    std::array<double, kMaxOrder + 1> f{};
    f[0] = 1.0;
    for (int k = 1; k <= kMaxOrder; ++k) f[k] = f[k - 1] * k;
    return f;
}
constexpr auto kFact = make_factorials();

}  // namespace

void size_terms(const Taylor& X, const Taylor& Y, int r, double* base, double* lift) {
    for (int k = 1; k <= r; ++k) base[k - 1] = kFact[k] * std::hypot(X.c[k], Y.c[k]);
    if (r < 2) return;
    // theta' = (x' y'' - y' x'') / (x'^2 + y'^2), needed to degree r-2
    const int m = r - 2;
    Taylor dx, dy, ddx, ddy;
    for (int j = 0; j <= m; ++j) {
        dx.c[j] = (j + 1) * X.c[j + 1];
        dy.c[j] = (j + 1) * Y.c[j + 1];
        ddx.c[j] = (j + 1) * (j + 2) * X.c[j + 2];
        ddy.c[j] = (j + 1) * (j + 2) * Y.c[j + 2];
    }
    Taylor t1, t2, num, den, q;
    taylor_mul(dx, ddy, m, t1);
    taylor_mul(dy, ddx, m, t2);
    for (int j = 0; j <= m; ++j) num.c[j] = t1.c[j] - t2.c[j];
    taylor_mul(dx, dx, m, t1);
    taylor_mul(dy, dy, m, t2);
    for (int j = 0; j <= m; ++j) den.c[j] = t1.c[j] + t2.c[j];
    if (!(den.c[0] > 0.0)) {
        for (int k = 1; k < r; ++k) lift[k - 1] = INFINITY;
        return;
    }
    taylor_div(num, den, m, q);
    for (int k = 1; k < r; ++k) lift[k - 1] = kFact[k - 1] * std::abs(q.c[k - 1]);
}

void image_series(const SurfaceMap& f, const RegularCurve& curve, double a, double b, double s,
                  int steps, int r, Taylor& X, Taylor& Y) {
    curve.taylor(a + b * s, b, r, X, Y);
    Jet jet;
    Taylor nx, ny;
    for (int i = 0; i < steps; ++i) {
        f.jet(X.c[0], Y.c[0], r, jet);
        compose(jet, X, Y, r, nx, ny);
        X = nx;
        Y = ny;
    }
}

namespace {

CrSize sup_over_grid(int r, int grid, const auto& series_at) {
    CrSize out;
    out.base_norms.assign(r, 0.0);
    out.lift_norms.assign(std::max(r - 1, 0), 0.0);
    std::array<double, kMaxOrder> base{}, lift{};
    Taylor X, Y;
    for (int i = 0; i < grid; ++i) {
        series_at(double(i) / (grid - 1), X, Y);
        size_terms(X, Y, r, base.data(), lift.data());
        for (int k = 0; k < r; ++k) out.base_norms[k] = std::max(out.base_norms[k], base[k]);
        for (int k = 0; k + 1 < r; ++k) out.lift_norms[k] = std::max(out.lift_norms[k], lift[k]);
    }
    for (double v : out.base_norms) out.eps = std::max(out.eps, v);
    for (double v : out.lift_norms) out.eps_hat = std::max(out.eps_hat, v);
    return out;
}

}  // namespace

CrSize cr_size(const RegularCurve& curve, int r, int grid) {
    if (r < 1 || r > kMaxOrder) throw PreconditionError("cr_size: order exceeds available jets");
    return sup_over_grid(r, grid, [&](double s, Taylor& X, Taylor& Y) { curve.taylor(s, 1.0, r, X, Y); });
}

CrSize cr_size_image(const SurfaceMap& f, const RegularCurve& curve, double a, double b, int steps,
                     int r, int grid) {
    if (r < 1 || r > kMaxOrder || r > f.order())
        throw PreconditionError("cr_size: order exceeds available jets");
    return sup_over_grid(r, grid, [&](double s, Taylor& X, Taylor& Y) {
        image_series(f, curve, a, b, s, steps, r, X, Y);
    });
}

}  // namespace srb
