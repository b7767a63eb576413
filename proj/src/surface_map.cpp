#include "srb/surface_map.hpp"

#include <algorithm>
#include <cmath>

#include "srb/error.hpp"

namespace srb {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_integer(double x) { return std::abs(x - std::round(x)) < 1e-12; }

void check_unimodular(const Mat2& A, const char* who) {
    if (!is_integer(A.a) || !is_integer(A.b) || !is_integer(A.c) || !is_integer(A.d))
        throw ModelError(std::string(who) + ": matrix entries must be integers");
    if (std::abs(std::abs(A.det()) - 1.0) > 1e-12)
        throw ModelError(std::string(who) + ": matrix determinant must be +-1");
}

// k-th derivative of w -> sin(2 pi w) / 2 pi.
double wave_derivative(double w, int k) {
    return std::pow(kTwoPi, k - 1) * std::sin(kTwoPi * w + k * (kPi / 2.0));
}

double wave(double w) { return std::sin(kTwoPi * w) / kTwoPi; }

}  // namespace

SurfaceMap::SurfaceMap(Model m) : model_(m) {
    std::visit(overloaded{
                   [&](const model::Identity&) { name_ = "identity"; },
                   [&](const model::Cat& c) {
                       check_unimodular(c.A, "cat");
                       name_ = "cat";
                   },
                   [&](const model::PerturbedCat& p) {
                       check_unimodular(p.A, "perturbed_cat");
                       if (!(std::abs(p.delta) < 0.05))
                           throw ModelError("perturbed_cat: |delta| must be below 0.05");
                       // det J = ad - (b + delta cv)(c + delta cu) with cu, cv in [-1,1]; the
                       // bilinear form is extremal at the corners.
                       double lo = 1e300, hi = -1e300;
                       for (double cu : {-1.0, 1.0}) {
                           for (double cv : {-1.0, 1.0}) {
                               const double det = p.A.a * p.A.d -
                                                  (p.A.b + p.delta * cv) * (p.A.c + p.delta * cu);
                               lo = std::min(lo, det);
                               hi = std::max(hi, det);
                           }
                       }
                       if (lo * hi <= 0.0 || std::min(std::abs(lo), std::abs(hi)) < 1e-12)
                           throw ModelError("perturbed_cat: Jacobian determinant changes sign");
                       name_ = "perturbed_cat";
                   },
                   [&](const model::Standard&) { name_ = "standard"; },
                   [&](const model::SourceSink& s) {
                       if (!(std::abs(s.delta) < 1.0))
                           throw ModelError("source_sink: |delta| must be below 1");
                       name_ = "source_sink";
                   },
               },
               model_);
}

bool SurfaceMap::is_linear() const {
    return std::holds_alternative<model::Identity>(model_) || std::holds_alternative<model::Cat>(model_);
}

std::optional<Mat2> SurfaceMap::linear_part() const {
    if (auto* c = std::get_if<model::Cat>(&model_)) return c->A;
    if (std::holds_alternative<model::Identity>(model_)) return Mat2::identity();
    return std::nullopt;
}

std::array<double, 2> SurfaceMap::lifted(double u, double v) const {
    return std::visit(overloaded{
                          [&](const model::Identity&) { return std::array<double, 2>{u, v}; },
                          [&](const model::Cat& c) { return c.A.apply(u, v); },
                          [&](const model::PerturbedCat& p) {
                              auto w = p.A.apply(u, v);
                              return std::array<double, 2>{w[0] + p.delta * wave(v),
                                                           w[1] + p.delta * wave(u)};
                          },
                          [&](const model::Standard& s) {
                              const double nv = v + s.kick * wave(u);
                              return std::array<double, 2>{u + nv, nv};
                          },
                          [&](const model::SourceSink& s) {
                              return std::array<double, 2>{u + s.delta * wave(u), v + s.delta * wave(v)};
                          },
                      },
                      model_);
}

SurfacePoint SurfaceMap::apply(const SurfacePoint& x) const {
    auto w = lifted(x.u, x.v);
    return SurfacePoint::normalized(w[0], w[1]);
}

Mat2 SurfaceMap::jacobian(double u, double v) const {
    return std::visit(overloaded{
                          [&](const model::Identity&) { return Mat2::identity(); },
                          [&](const model::Cat& c) { return c.A; },
                          [&](const model::PerturbedCat& p) {
                              return Mat2{p.A.a, p.A.b + p.delta * std::cos(kTwoPi * v),
                                          p.A.c + p.delta * std::cos(kTwoPi * u), p.A.d};
                          },
                          [&](const model::Standard& s) {
                              const double kc = s.kick * std::cos(kTwoPi * u);
                              return Mat2{1.0 + kc, 1.0, kc, 1.0};
                          },
                          [&](const model::SourceSink& s) {
                              return Mat2{1.0 + s.delta * std::cos(kTwoPi * u), 0.0, 0.0,
                                          1.0 + s.delta * std::cos(kTwoPi * v)};
                          },
                      },
                      model_);
}

void SurfaceMap::jet(double u, double v, int r, Jet& out) const {
    if (r < 1 || r > kMaxOrder) throw PreconditionError("jet: order out of range");
    out.order = r;
    for (int k = 1; k <= r; ++k)
        for (int i = 0; i < 2; ++i) out.d[k][i].fill(0.0);
    const auto w = lifted(u, v);
    out.fu = w[0];
    out.fv = w[1];
    const Mat2 J = jacobian(u, v);
    out.d[1][0][1] = J.a;
    out.d[1][0][0] = J.b;
    out.d[1][1][1] = J.c;
    out.d[1][1][0] = J.d;
    std::visit(overloaded{
                   [&](const model::Identity&) {},
                   [&](const model::Cat&) {},
                   [&](const model::PerturbedCat& p) {
                       for (int k = 2; k <= r; ++k) {
                           out.d[k][0][0] = p.delta * wave_derivative(v, k);
                           out.d[k][1][k] = p.delta * wave_derivative(u, k);
                       }
                   },
                   [&](const model::Standard& s) {
                       for (int k = 2; k <= r; ++k) {
                           const double g = s.kick * wave_derivative(u, k);
                           out.d[k][0][k] = g;
                           out.d[k][1][k] = g;
                       }
                   },
                   [&](const model::SourceSink& s) {
                       for (int k = 2; k <= r; ++k) {
                           out.d[k][0][k] = s.delta * wave_derivative(u, k);
                           out.d[k][1][0] = s.delta * wave_derivative(v, k);
                       }
                   },
               },
               model_);
    out.finalize();
}

namespace {

SurfacePoint newton_inverse(const SurfaceMap& f, const SurfacePoint& y, SurfacePoint x) {
    double u = x.u, v = x.v;
    for (int it = 0; it < 60; ++it) {
        auto w = f.lifted(u, v);
        double ru = w[0] - y.u;
        double rv = w[1] - y.v;
        ru -= std::round(ru);
        rv -= std::round(rv);
        if (std::hypot(ru, rv) < 1e-15) break;
        const Mat2 J = f.jacobian(u, v);
        const double det = J.det();
        u -= (J.d * ru - J.b * rv) / det;
        v -= (-J.c * ru + J.a * rv) / det;
    }
    return SurfacePoint::normalized(u, v);
}

Mat2 integer_inverse(const Mat2& A) {
    const double det = A.det();
    return {A.d / det, -A.b / det, -A.c / det, A.a / det};
}

}  // namespace

SurfacePoint SurfaceMap::inverse(const SurfacePoint& y) const {
    return std::visit(overloaded{
                          [&](const model::Identity&) { return y; },
                          [&](const model::Cat& c) {
                              auto w = integer_inverse(c.A).apply(y.u, y.v);
                              return SurfacePoint::normalized(w[0], w[1]);
                          },
                          [&](const model::PerturbedCat& p) {
                              auto w = integer_inverse(p.A).apply(y.u, y.v);
                              return newton_inverse(*this, y, SurfacePoint::normalized(w[0], w[1]));
                          },
                          [&](const model::Standard& s) {
                              const double u = y.u - y.v;
                              return SurfacePoint::normalized(u, y.v - s.kick * wave(u));
                          },
                          [&](const model::SourceSink&) { return newton_inverse(*this, y, y); },
                      },
                      model_);
}

}  // namespace srb
