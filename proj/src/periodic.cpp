#include <algorithm>
#include <cmath>

#include "srb/dynamics.hpp"
#include "srb/error.hpp"
#include "srb/kernels.hpp"
#include "srb/measure.hpp"

namespace srb {

const char* to_string(OrbitKind k) {
    switch (k) {
        case OrbitKind::Saddle: return "saddle";
        case OrbitKind::Repelling: return "repelling";
        case OrbitKind::Attracting: return "attracting";
        case OrbitKind::Elliptic: return "elliptic";
        case OrbitKind::Parabolic: return "parabolic";
    }
    return "unknown";
}

std::vector<SurfacePoint> PeriodicScanReport::repelling_points() const {
    std::vector<SurfacePoint> out;
    for (const auto& o : orbits)
        if (o.kind == OrbitKind::Repelling) out.insert(out.end(), o.points.begin(), o.points.end());
    return out;
}

namespace {

constexpr double kDedupTol = 1e-8;

bool lex_less(const SurfacePoint& a, const SurfacePoint& b) {
    return a.u < b.u || (a.u == b.u && a.v < b.v);
}

PeriodicOrbit build_orbit(const SurfaceMap& f, const SurfacePoint& x, int p) {
    PeriodicOrbit o;
    o.period = p;
    Mat2 M = Mat2::identity();
    SurfacePoint y = x;
    for (int i = 0; i < p; ++i) {
        o.points.push_back(y);
        M = differential(f, y) * M;
        y = apply(f, y);
    }
    std::rotate(o.points.begin(), std::min_element(o.points.begin(), o.points.end(), lex_less), o.points.end());
    const double tr = M.a + M.d, det = M.det();
    const double disc = tr * tr - 4.0 * det;
    if (disc >= 0.0) {
        const double r = std::sqrt(disc);
        const double l1 = std::abs((tr + r) / 2.0), l2 = std::abs((tr - r) / 2.0);
        o.modulus_hi = std::max(l1, l2);
        o.modulus_lo = std::min(l1, l2);
    } else {
        o.modulus_hi = o.modulus_lo = std::sqrt(std::abs(det));
    }
    constexpr double eps = 1e-9;
    if (o.modulus_lo > 1.0 + eps) o.kind = OrbitKind::Repelling;
    else if (o.modulus_hi < 1.0 - eps) o.kind = OrbitKind::Attracting;
    else if (o.modulus_hi > 1.0 + eps && o.modulus_lo < 1.0 - eps) o.kind = OrbitKind::Saddle;
    else if (disc < 0.0) o.kind = OrbitKind::Elliptic;
    else o.kind = OrbitKind::Parabolic;
    return o;
}

}  // namespace

PeriodicScanReport periodic_orbit_scan(const SurfaceMap& f, int max_period, int grid) {
    if (max_period < 1 || max_period > 12) throw PreconditionError("periodic_orbit_scan: max_period must be in [1,12]");
    if (grid < 1) throw PreconditionError("periodic_orbit_scan: grid must be positive");
    PeriodicScanReport rep;
    rep.max_period = max_period;
    rep.grid = grid;

    std::vector<SurfacePoint> seeds;
    seeds.reserve(size_t(grid) * grid);
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) seeds.push_back({double(i) / grid, double(j) / grid});

    bool all_fixed = true;
    for (const auto& s : seeds)
        if (torus_distance(apply(f, s), s) > 1e-12) {
            all_fixed = false;
            break;
        }
    if (all_fixed) {
        rep.degenerate_all_periodic = true;
        return rep;
    }

    for (int p = 1; p <= max_period; ++p) {
        const auto found = kernels::newton_periodic(f, seeds, p);
        for (const auto& x : found) {
            if (!x) continue;
            // keep minimal period only
            bool smaller = false;
            SurfacePoint y = *x;
            for (int q = 1; q < p; ++q) {
                y = apply(f, y);
                if (p % q == 0 && torus_distance(y, *x) <= kDedupTol) {
                    smaller = true;
                    break;
                }
            }
            if (smaller) continue;
            bool dup = false;
            for (const auto& o : rep.orbits) {
                if (o.period != p) continue;
                for (const auto& q : o.points)
                    if (torus_distance(q, *x) <= kDedupTol) dup = true;
                if (dup) break;
            }
            if (!dup) rep.orbits.push_back(build_orbit(f, *x, p));
        }
    }
    std::stable_sort(rep.orbits.begin(), rep.orbits.end(), [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
        if (a.period != b.period) return a.period < b.period;
        return lex_less(a.points[0], b.points[0]);
    });
    return rep;
}

}  // namespace srb
