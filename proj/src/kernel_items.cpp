#include "kernel_items.hpp"

#include <algorithm>
#include <cmath>

#include "srb/error.hpp"

namespace srb {

bool CoverTargets::meets(double lo, double hi) const {
    auto it = std::lower_bound(values.begin(), values.end(), lo);
    return it != values.end() && *it <= hi;
}

namespace detail {

bool tn_member(const SurfaceMap& f, const RegularCurve& curve, double s, int n, double lambda_min,
               double lambda_max) {
    const auto d = curve.derivative(s, 1);
    if (!(std::hypot(d[0], d[1]) >= 1e-12)) throw PreconditionError("degenerate curve: sigma' vanishes at a sample");
    PhiSequence seq;
    seq.values.resize(n);
    ProjectivePoint xi = curve.lifted_point(s);
    const SurfacePoint x0 = xi.base;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        xi = projective_step(f, xi, seq.values[i]);
        sum += seq.values[i];
        if (torus_distance(xi.base, x0) <= 1e-9) return false;
    }
    const double avg = sum / n;
    if (!(avg >= lambda_min && avg <= lambda_max)) return false;
    return suffix_positive(seq);
}

double curve_exponent(const SurfaceMap& f, const RegularCurve& curve, double s, int n) {
    ProjectivePoint xi = curve.lifted_point(s);
    double sum = 0.0, p = 0.0;
    for (int i = 0; i < n; ++i) {
        xi = projective_step(f, xi, p);
        sum += p;
    }
    return sum / n;
}

ProjectivePoint dilation_grid_point(const DilationGrid& g, long idx) {
    const long k = idx % g.ntheta;
    const long j = (idx / g.ntheta) % g.nv;
    const long i = idx / (long(g.ntheta) * g.nv);
    return {{double(i) / g.nu, double(j) / g.nv}, {k * kPi / g.ntheta}};
}

void moments_chunk(const TestDictionary& dict, const EmpiricalMeasure& mu, size_t lo, size_t hi, double* out) {
    std::vector<double> vals(dict.size());
    std::fill(out, out + dict.size(), 0.0);
    for (size_t i = lo; i < hi; ++i) {
        dict.evaluate_all(mu.atoms[i].point, vals.data());
        const double w = mu.atoms[i].weight;
        for (int j = 0; j < dict.size(); ++j) out[j] += w * vals[j];
    }
}

double forward_average(const SurfaceMap& f, const ProjectivePoint& start, int horizon) {
    ProjectivePoint xi = start;
    double sum = 0.0, p = 0.0;
    for (int i = 0; i < horizon; ++i) {
        xi = projective_step(f, xi, p);
        sum += p;
    }
    return horizon > 0 ? sum / horizon : 0.0;
}

std::optional<SurfacePoint> newton_periodic_one(const SurfaceMap& f, const SurfacePoint& seed, int p) {
    SurfacePoint x = seed;
    for (int it = 0; it < 60; ++it) {
        SurfacePoint y = x;
        Mat2 M = Mat2::identity();
        for (int i = 0; i < p; ++i) {
            M = f.jacobian(y.u, y.v) * M;
            y = f.apply(y);
        }
        const double ru = torus_delta(y.u, x.u), rv = torus_delta(y.v, x.v);
        if (std::hypot(ru, rv) <= 1e-12 * std::max(1.0, operator_norm(M))) return x;
        const Mat2 J{M.a - 1.0, M.b, M.c, M.d - 1.0};
        const double det = J.det();
        if (std::abs(det) < 1e-14) return std::nullopt;
        double du = -(J.d * ru - J.b * rv) / det;
        double dv = -(-J.c * ru + J.a * rv) / det;
        const double len = std::hypot(du, dv);
        if (len > 0.1) {
            du *= 0.1 / len;
            dv *= 0.1 / len;
        }
        x = SurfacePoint::normalized(x.u + du, x.v + dv);
    }
    return std::nullopt;
}

namespace {

std::optional<SizeCertificate> certify_piece(const RegularCurve& curve, const SurfaceMap& f,
                                             const Reparametrization& psi, int mark, double eps, double eps_hat,
                                             const SubdivisionOptions& opts) {
    const int g = opts.grid(), r = opts.r;
    std::array<double, kMaxOrder> base{}, lift{};
    Taylor X, Y;
    SizeCertificate cert{mark, 0.0, 0.0, false};
    for (int i = 0; i < g; ++i) {
        image_series(f, curve, psi.a, psi.b, double(i) / (g - 1), mark, r, X, Y);
        size_terms(X, Y, r, base.data(), lift.data());
        for (int k = 0; k < r; ++k) {
            if (!(base[k] <= eps)) return std::nullopt;
            cert.eps = std::max(cert.eps, base[k]);
        }
        for (int k = 0; k + 1 < r; ++k) {
            if (!(lift[k] <= eps_hat)) return std::nullopt;
            cert.eps_hat = std::max(cert.eps_hat, lift[k]);
        }
    }
    return cert;
}

void refine(const RegularCurve& curve, const SurfaceMap& f, const CoverTargets& targets, Piece piece, int mark,
            double eps, double eps_hat, const SubdivisionOptions& opts, std::vector<Piece>& out) {
    if (!targets.meets(piece.psi.lo(), piece.psi.hi())) return;
    if (auto cert = certify_piece(curve, f, piece.psi, mark, eps, eps_hat, opts)) {
        piece.certs.push_back(*cert);
        out.push_back(std::move(piece));
        return;
    }
    if (piece.depth >= opts.depth_cap)
        throw DepthCapExceeded("subdivision depth cap reached at mark " + std::to_string(mark), piece.psi.lo(),
                               piece.psi.hi());
    for (double half : {0.0, 0.5}) {
        Piece child;
        child.psi = piece.psi.compose({half, 0.5});
        child.depth = piece.depth + 1;
        child.certs = piece.certs;
        for (auto& c : child.certs) {
            c.eps *= 0.5;
            c.eps_hat *= 0.5;
            c.inherited = true;
        }
        refine(curve, f, targets, std::move(child), mark, eps, eps_hat, opts, out);
    }
}

}  // namespace

std::vector<Piece> refine_piece(const RegularCurve& curve, const SurfaceMap& f, const CoverTargets& targets,
                                const Piece& piece, int mark, double eps, double eps_hat,
                                const SubdivisionOptions& opts) {
    std::vector<Piece> out;
    refine(curve, f, targets, piece, mark, eps, eps_hat, opts, out);
    return out;
}

}  // namespace detail
}  // namespace srb
