#include "srb/measure.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "srb/error.hpp"
#include "srb/kernels.hpp"

namespace srb {

double EmpiricalMeasure::total_mass() const {
    double m = 0.0;
    for (const auto& a : atoms) m += a.weight;
    return m;
}

void EmpiricalMeasure::validate() const {
    for (const auto& a : atoms)
        if (!(a.weight >= 0.0)) throw PreconditionError("measure has a negative weight");
    if (total_mass() > 1.0 + 1e-12) throw PreconditionError("measure has mass above 1");
}

EmpiricalMeasure EmpiricalMeasure::scaled(double factor) const {
    EmpiricalMeasure out = *this;
    for (auto& a : out.atoms) a.weight *= factor;
    return out;
}

double EmpiricalMeasure::integrate_phi(const SurfaceMap& f) const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.weight * phi(f, a.point);
    return s;
}

double BaseMeasure::total_mass() const {
    double m = 0.0;
    for (const auto& a : atoms) m += a.second;
    return m;
}

double TestFunction::operator()(const ProjectivePoint& xi) const {
    const double arg = kTwoPi * (a * xi.base.u + b * xi.base.v);
    const double g = base_sin ? std::sin(arg) : std::cos(arg);
    const double h = fiber_sin ? std::sin(2.0 * c * xi.dir.theta) : std::cos(2.0 * c * xi.dir.theta);
    return g * h;
}

TestDictionary TestDictionary::trig(int A, int C) {
    TestDictionary d;
    d.A_ = A;
    d.C_ = C;
    d.version_ = "trig-A" + std::to_string(A) + "-C" + std::to_string(C) + "-v1";
    for (int a = 0; a <= A; ++a)
        for (int b = -A; b <= A; ++b) {
            if (a == 0 && b < 0) continue;
            for (int bs = 0; bs < 2; ++bs) {
                if (bs && a == 0 && b == 0) continue;
                for (int c = 0; c <= C; ++c)
                    for (int fs = 0; fs < 2; ++fs) {
                        if (fs && c == 0) continue;
                        TestFunction t{a, b, bool(bs), c, bool(fs), 0.0};
                        t.lipschitz = std::sqrt(4.0 * kPi * kPi * (a * a + b * b) + 4.0 * c * c);
                        d.functions_.push_back(t);
                    }
            }
        }
    std::stable_sort(d.functions_.begin(), d.functions_.end(), [](const TestFunction& x, const TestFunction& y) {
        return x.a * x.a + x.b * x.b + x.c * x.c < y.a * y.a + y.b * y.b + y.c * y.c;
    });
    d.weights_.resize(d.functions_.size());
    for (size_t j = 0; j < d.weights_.size(); ++j) d.weights_[j] = std::ldexp(1.0, -int(j) - 1);
    return d;
}

double TestDictionary::lipschitz_sum() const {
    double s = 0.0;
    for (size_t j = 0; j < functions_.size(); ++j) s += weights_[j] * functions_[j].lipschitz;
    return s;
}

void TestDictionary::evaluate_all(const ProjectivePoint& xi, double* out) const {
    // powers of exp(2 pi i u), exp(2 pi i v), exp(2 i theta) by recurrence
    std::array<std::complex<double>, 16> eu, ev, et;
    const auto zu = std::polar(1.0, kTwoPi * xi.base.u);
    const auto zv = std::polar(1.0, kTwoPi * xi.base.v);
    const auto zt = std::polar(1.0, 2.0 * xi.dir.theta);
    eu[0] = ev[0] = et[0] = 1.0;
    for (int k = 1; k <= std::max(A_, C_); ++k) {
        eu[k] = eu[k - 1] * zu;
        ev[k] = ev[k - 1] * zv;
        et[k] = et[k - 1] * zt;
    }
    for (size_t j = 0; j < functions_.size(); ++j) {
        const auto& t = functions_[j];
        const auto vb = t.b >= 0 ? ev[t.b] : std::conj(ev[-t.b]);
        const auto e = eu[t.a] * vb;
        const double g = t.base_sin ? e.imag() : e.real();
        const double h = t.fiber_sin ? et[t.c].imag() : et[t.c].real();
        out[j] = g * h;
    }
}

std::vector<double> TestDictionary::moments(const EmpiricalMeasure& mu) const {
    return kernels::dictionary_moments(*this, mu);
}

MomentVector moment_vector(const EmpiricalMeasure& mu, const TestDictionary& dict) {
    return {dict.version(), dict.moments(mu)};
}

double weak_star_distance(const MomentVector& m, const MomentVector& n, const TestDictionary& dict) {
    if (m.version != dict.version() || n.version != dict.version())
        throw PreconditionError("test dictionary version mismatch");
    double d = 0.0;
    for (int j = 0; j < dict.size(); ++j) d += dict.weights()[j] * std::abs(m.values[j] - n.values[j]);
    return d;
}

double weak_star_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, const TestDictionary& dict) {
    return weak_star_distance(moment_vector(mu, dict), moment_vector(nu, dict), dict);
}

EmpiricalMeasure empirical_from_orbit(const ProjectiveOrbit& orbit) {
    EmpiricalMeasure mu;
    const double w = 1.0 / orbit.points.size();
    mu.atoms.reserve(orbit.points.size());
    for (const auto& p : orbit.points) mu.atoms.push_back({p, w});
    return mu;
}

EmpiricalMeasure empirical_measure(const SurfaceMap& f, const ProjectivePoint& xi, int n) {
    if (n < 1) throw PreconditionError("empirical_measure: n must be >= 1");
    return empirical_from_orbit(projective_orbit(f, xi, n));
}

EmpiricalMeasure neutral_from_orbit(const ProjectiveOrbit& orbit, const NeutralDecomposition& dec) {
    EmpiricalMeasure mu;
    const double w = 1.0 / orbit.points.size();
    for (size_t i = 0; i < orbit.points.size(); ++i)
        if (dec.in_neutral[i]) mu.atoms.push_back({orbit.points[i], w});
    return mu;
}

EmpiricalMeasure neutral_empirical(const SurfaceMap& f, const ProjectivePoint& xi, int n, double alpha,
                                   int capL) {
    const auto orbit = projective_orbit(f, xi, n);
    const auto dec = maximal_neutral_segments({orbit.phi, xi}, alpha, capL);
    return neutral_from_orbit(orbit, dec);
}

MeasureDecomposition decompose(const SurfaceMap& f, const ProjectivePoint& xi, int n,
                               const std::vector<double>& alpha_grid, const std::vector<int>& L_grid,
                               const DecomposeOptions& opts) {
    if (alpha_grid.empty() || L_grid.empty()) throw PreconditionError("decompose: empty grid");
    if (!std::is_sorted(alpha_grid.begin(), alpha_grid.end()) || !std::is_sorted(L_grid.begin(), L_grid.end()))
        throw PreconditionError("decompose: grids must be sorted");
    auto orbit = projective_orbit(f, xi, n);
    PhiSequence seq{orbit.phi, xi};

    MeasureDecomposition dec;
    if (opts.truncate_to_suffix_positive) {
        const int last = pliss_times(seq, 0.0).back();
        if (last >= 1 && last < n) {
            orbit.points.resize(last);
            orbit.phi.resize(last);
            seq.values.resize(last);
        }
    }
    dec.n = seq.size();
    dec.suffix_positive = suffix_positive(seq);
    for (double v : seq.values) dec.orbit_phi_sup = std::max(dec.orbit_phi_sup, std::abs(v));
    dec.p_n = empirical_from_orbit(orbit);

    auto& T = dec.table;
    T.alphas = alpha_grid;
    T.Ls = L_grid;
    T.mass.assign(alpha_grid.size(), std::vector<double>(L_grid.size()));
    T.phi_integral = T.mass;
    NeutralDecomposition corner;
    for (size_t ia = 0; ia < alpha_grid.size(); ++ia)
        for (size_t il = 0; il < L_grid.size(); ++il) {
            auto nd = maximal_neutral_segments(seq, alpha_grid[ia], L_grid[il]);
            double integral = 0.0;
            for (int i = 0; i < dec.n; ++i)
                if (nd.in_neutral[i]) integral += seq.values[i];
            T.mass[ia][il] = nd.mass();
            T.phi_integral[ia][il] = integral / dec.n;
            if (ia == 0 && il + 1 == L_grid.size()) corner = std::move(nd);
        }

    const size_t la = 0, ll = L_grid.size() - 1;
    if (alpha_grid.size() > 1 && L_grid.size() > 1) {
        dec.stabilization_gap = std::abs(T.mass[la][ll] - T.mass[la + 1][ll - 1]);
        if (dec.stabilization_gap > opts.stabilization_tol)
            throw NonStabilization("neutral mass varies by " + std::to_string(dec.stabilization_gap) +
                                   " across the last grid refinement");
    }

    dec.m0 = neutral_from_orbit(orbit, corner);
    dec.beta = 1.0 - T.mass[la][ll];
    if (dec.beta < 1.0) dec.mu0_hat = dec.m0.scaled(1.0 / (1.0 - dec.beta));
    if (dec.beta > 0.0) {
        // complement of the corner neutral part, renormalized
        const double w = 1.0 / (dec.n * dec.beta);
        for (int i = 0; i < dec.n; ++i)
            if (!corner.in_neutral[i]) dec.mu1_hat.atoms.push_back({orbit.points[i], w});
    }
    return dec;
}

ItemCReport check_item_c(const MeasureDecomposition& dec, double phi_bound) {
    constexpr double tol = 1e-12;
    ItemCReport rep;
    rep.applicable = dec.suffix_positive;
    rep.pass = true;
    const auto& T = dec.table;
    if (!T.phi_integral.empty() && !T.Ls.empty()) rep.residual = T.phi_integral[0][T.Ls.size() - 1];
    for (size_t ia = 0; ia < T.alphas.size(); ++ia)
        for (size_t il = 0; il < T.Ls.size(); ++il) {
            ItemCEntry e;
            e.alpha = T.alphas[ia];
            e.L = T.Ls[il];
            e.integral = T.phi_integral[ia][il];
            e.lower = -phi_bound / e.L;
            e.upper = e.alpha;
            e.ok = e.integral >= e.lower - tol && e.integral <= e.upper + tol;
            rep.pass = rep.pass && e.ok;
            rep.entries.push_back(e);
        }
    return rep;
}

ItemDReport check_item_d(const SurfaceMap& f, const MeasureDecomposition& dec, int sample_count,
                         int horizon, std::mt19937_64& rng) {
    ItemDReport rep;
    if (!(dec.beta > 0.0) || dec.mu1_hat.empty()) return rep;
    rep.applicable = true;
    std::vector<double> w;
    w.reserve(dec.mu1_hat.atoms.size());
    for (const auto& a : dec.mu1_hat.atoms) w.push_back(a.weight);
    std::discrete_distribution<size_t> pick(w.begin(), w.end());
    std::vector<ProjectivePoint> starts(sample_count);
    for (auto& s : starts) s = dec.mu1_hat.atoms[pick(rng)].point;
    const auto avg = kernels::forward_averages(f, starts, horizon);
    rep.samples = sample_count;
    rep.min_average = avg.empty() ? 0.0 : *std::min_element(avg.begin(), avg.end());
    int pos = 0;
    for (double a : avg) pos += a > 0.0 ? 1 : 0;
    rep.fraction_positive = sample_count > 0 ? double(pos) / sample_count : 0.0;
    return rep;
}

BaseMeasure pushforward(const EmpiricalMeasure& mu_hat) {
    BaseMeasure out;
    out.atoms.reserve(mu_hat.atoms.size());
    for (const auto& a : mu_hat.atoms) out.atoms.emplace_back(a.point.base, a.weight);
    return out;
}

double lyapunov_of_measure(const SurfaceMap& f, const EmpiricalMeasure& mu_hat,
                           const PeriodicScanReport& source_check) {
    constexpr double radius = 1e-3;
    const auto sources = source_check.repelling_points();
    double near = 0.0;
    for (const auto& a : mu_hat.atoms)
        for (const auto& p : sources)
            if (torus_distance(a.point.base, p) <= radius) {
                near += a.weight;
                break;
            }
    if (near > 0.0)
        throw HypothesisViolation("measure gives mass " + std::to_string(near) + " to a repelling periodic orbit");
    const double integral = mu_hat.integrate_phi(f);
    if (!(integral > 0.0))
        throw HypothesisViolation("integral of phi is not positive (" + std::to_string(integral) + ")");
    return integral;
}

std::optional<double> entropy_reference(const SurfaceMap& f) {
    if (std::holds_alternative<model::Identity>(f.model())) return 0.0;
    if (const auto* cat = std::get_if<model::Cat>(&f.model())) {
        const auto& A = cat->A;
        const double tr = A.a + A.d, det = A.det();
        const double disc = tr * tr - 4.0 * det;
        if (disc <= 0.0) return 0.0;
        const double top = (std::abs(tr) + std::sqrt(disc)) / 2.0;
        return std::max(0.0, std::log(top));
    }
    return std::nullopt;
}

ClusterResult cluster_parameters(const ParameterSet& params,
                                 const std::vector<std::vector<MomentVector>>& measures,
                                 const TestDictionary& dict, double delta) {
    if (!(delta > 0.0)) throw PreconditionError("cluster_parameters: delta must be positive");
    const auto idx = params.member_indices();
    if (measures.size() != idx.size()) throw PreconditionError("cluster_parameters: one measure list per member");
    for (const auto& list : measures)
        for (const auto& m : list)
            if (m.version != dict.version()) throw PreconditionError("test dictionary version mismatch");
    const auto& w = dict.weights();
    // true iff every tracked distance is below delta/2; stops at the first excess
    auto close = [&](size_t i, size_t j) {
        for (size_t k = 0; k < measures[i].size(); ++k) {
            const auto& a = measures[i][k].values;
            const auto& b = measures[j][k].values;
            double d = 0.0;
            for (size_t q = 0; q < w.size(); ++q) {
                d += w[q] * std::abs(a[q] - b[q]);
                if (!(d < delta / 2)) return false;
            }
        }
        return true;
    };
    std::vector<size_t> centers;
    std::vector<std::vector<int>> cells;
    for (size_t i = 0; i < idx.size(); ++i) {
        size_t c = 0;
        while (c < centers.size() && !close(i, centers[c])) ++c;
        if (c == centers.size()) {
            centers.push_back(i);
            cells.emplace_back();
        }
        cells[c].push_back(idx[i]);
    }
    ClusterResult out;
    out.cover_size = int(centers.size());
    size_t best = 0;
    for (size_t c = 1; c < cells.size(); ++c)
        if (cells[c].size() > cells[best].size()) best = c;
    out.selected = params.restricted(cells.empty() ? std::vector<int>{} : cells[best]);
    out.largest_cell = out.selected.count();
    out.ratio = idx.empty() ? 0.0 : double(out.largest_cell) / idx.size();
    return out;
}

int CellSet::cell_index(const ProjectivePoint& xi) const {
    const int i = std::min(int(xi.base.u * nu), nu - 1);
    const int j = std::min(int(xi.base.v * nv), nv - 1);
    const int k = std::min(int(xi.dir.theta / kPi * ntheta), ntheta - 1);
    return (i * nv + j) * ntheta + k;
}

ProjectivePoint CellSet::cell_center(int idx) const {
    const int k = idx % ntheta, j = (idx / ntheta) % nv, i = idx / (ntheta * nv);
    return {{(i + 0.5) / nu, (j + 0.5) / nv}, {(k + 0.5) * kPi / ntheta}};
}

bool CellSet::contains(const ProjectivePoint& xi) const {
    return !cells.empty() && cells[cell_index(xi)] != 0;
}

double CellSet::mass(const EmpiricalMeasure& mu) const {
    double m = 0.0;
    for (const auto& a : mu.atoms)
        if (contains(a.point)) m += a.weight;
    return m;
}

int CellSet::count() const {
    int c = 0;
    for (auto x : cells) c += x ? 1 : 0;
    return c;
}

CellSet heavy_cells(const EmpiricalMeasure& mu, double gamma, int nu, int nv, int ntheta) {
    CellSet s{nu, nv, ntheta, std::vector<std::uint8_t>(size_t(nu) * nv * ntheta, 0)};
    std::vector<double> w(s.cells.size(), 0.0);
    for (const auto& a : mu.atoms) w[s.cell_index(a.point)] += a.weight;
    const double total = mu.total_mass();
    if (!(total > 0.0)) return s;
    std::vector<int> order(w.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return w[x] > w[y]; });
    double covered = 0.0;
    for (int c : order) {
        if (covered > (1.0 - gamma * gamma) * total || w[c] <= 0.0) break;
        s.cells[c] = 1;
        covered += w[c];
    }
    return s;
}

int separate_colors(const SurfaceMap& f, std::vector<CellSet>& colors, const std::vector<int>& lengths) {
    int removed = 0;
    for (size_t c = 0; c < colors.size(); ++c)
        for (size_t c2 = 0; c2 < colors.size(); ++c2) {
            if (c == c2) continue;
            for (size_t idx = 0; idx < colors[c].cells.size(); ++idx) {
                if (!colors[c].cells[idx]) continue;
                ProjectivePoint xi = colors[c].cell_center(int(idx));
                for (int j = 0; j <= lengths.at(c); ++j) {
                    const int hit = colors[c2].cell_index(xi);
                    if (colors[c2].cells[hit]) {
                        colors[c2].cells[hit] = 0;
                        ++removed;
                    }
                    xi = projective_apply(f, xi);
                }
            }
        }
    return removed;
}

}  // namespace srb
