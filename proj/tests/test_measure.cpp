#include <doctest.h>

#include <cmath>
#include <random>

#include "srb/dynamics.hpp"
#include "srb/error.hpp"
#include "srb/measure.hpp"
#include "srb/orbit_analysis.hpp"

using namespace srb;

namespace {

const double kLam = std::log((3.0 + std::sqrt(5.0)) / 2.0);
const double kUnstable = std::atan2((std::sqrt(5.0) - 1.0) / 2.0, 1.0);
const ProjectivePoint kSea{{0.1234, 0.5678}, {0.3}};

ProjectivePoint random_xi(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return {{u(rng), u(rng)}, {kPi * u(rng)}};
}

EmpiricalMeasure random_measure(std::mt19937_64& rng, int atoms) {
    EmpiricalMeasure mu;
    for (int i = 0; i < atoms; ++i) mu.atoms.push_back({random_xi(rng), 1.0 / atoms});
    return mu;
}

const MeasureDecomposition& standard_run() {
    static const auto dec =
        decompose(SurfaceMap::standard(1.2), kSea, 100000, {0.02, 0.05, 0.1}, {50, 100, 200}, {0.2, true});
    return dec;
}

}  // namespace

TEST_CASE("empirical measures of fixed points") {
    const ProjectivePoint xi{{0.3, 0.7}, {1.0}};
    const auto mu = empirical_measure(SurfaceMap::identity(), xi, 5);
    REQUIRE(mu.atoms.size() == 5);
    for (const auto& a : mu.atoms) CHECK(a.point == xi);
    CHECK(mu.total_mass() == doctest::Approx(1.0).epsilon(1e-15));
    const ProjectivePoint fixed{{0.0, 0.0}, {kUnstable}};
    const auto nu = empirical_measure(SurfaceMap::cat(), fixed, 3);
    REQUIRE(nu.atoms.size() == 3);
    for (const auto& a : nu.atoms) {
        CHECK(torus_distance(a.point.base, fixed.base) == 0.0);
        CHECK(std::abs(angle_delta(a.point.dir.theta, kUnstable)) < 1e-14);
    }
}

TEST_CASE("integral of phi against p_n is the Birkhoff average") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> len(1, 50);
    const auto f = SurfaceMap::standard(1.2);
    for (int t = 0; t < 100; ++t) {
        const auto xi = random_xi(rng);
        const int n = len(rng);
        const auto orbit = projective_orbit(f, xi, n);
        double s = 0.0;
        for (double v : orbit.phi) s += v;
        CHECK(empirical_measure(f, xi, n).integrate_phi(f) == doctest::Approx(s / n).epsilon(1e-12));
    }
}

TEST_CASE("neutral parts") {
    const auto cat = SurfaceMap::cat();
    CHECK(neutral_empirical(cat, {{0.1, 0.3}, {kUnstable}}, 200, 0.5, 10).empty());
    const auto id = SurfaceMap::identity();
    const ProjectivePoint xi{{0.3, 0.7}, {1.0}};
    const auto all = neutral_empirical(id, xi, 20, 0.1, 5);
    const auto emp = empirical_measure(id, xi, 20);
    REQUIRE(all.atoms.size() == emp.atoms.size());
    for (size_t i = 0; i < all.atoms.size(); ++i) {
        CHECK(all.atoms[i].point == emp.atoms[i].point);
        CHECK(all.atoms[i].weight == emp.atoms[i].weight);
    }
    // synthetic orbit with phi = (2, -1, 2)
    ProjectiveOrbit orbit;
    for (int i = 0; i < 3; ++i) orbit.points.push_back({{0.1 * i, 0.0}, {0.0}});
    orbit.phi = {2.0, -1.0, 2.0};
    const auto d = maximal_neutral_segments({orbit.phi, std::nullopt}, 0.5, 2);
    const auto m = neutral_from_orbit(orbit, d);
    REQUIRE(m.atoms.size() == 2);
    CHECK(m.atoms[0].point == orbit.points[1]);
    CHECK(m.atoms[1].point == orbit.points[2]);
    CHECK(m.total_mass() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("mass additivity of neutral part and complement") {
    const auto f = SurfaceMap::standard(1.2);
    const auto orbit = projective_orbit(f, kSea, 5000);
    const auto d = maximal_neutral_segments({orbit.phi, std::nullopt}, 0.1, 20);
    const auto m = neutral_from_orbit(orbit, d);
    const auto p = empirical_from_orbit(orbit);
    size_t j = 0;
    int complement = 0;
    for (size_t i = 0; i < orbit.points.size(); ++i) {
        if (d.in_neutral[i]) {
            REQUIRE(j < m.atoms.size());
            CHECK(m.atoms[j].point == p.atoms[i].point);
            CHECK(m.atoms[j].weight == p.atoms[i].weight);
            ++j;
        } else {
            ++complement;
        }
    }
    CHECK(j == m.atoms.size());
    CHECK(int(j) + complement == 5000);
}

TEST_CASE("test dictionary shape") {
    const auto dict = TestDictionary::trig();
    CHECK(dict.version() == "trig-A3-C2-v1");
    CHECK(dict.size() > 0);
    double prev = 0;
    for (int j = 0; j < dict.size(); ++j) {
        const auto& g = dict.functions()[j];
        const double freq = g.a * g.a + g.b * g.b + g.c * g.c;
        CHECK(freq >= prev);
        prev = freq;
        CHECK(dict.weights()[j] == std::ldexp(1.0, -(j + 1)));
        CHECK(std::abs(g.a) <= 3);
        CHECK(std::abs(g.b) <= 3);
        CHECK(g.c <= 2);
    }
    // evaluate_all agrees with the individual functions
    std::mt19937_64 rng(2);
    std::vector<double> out(dict.size());
    for (int t = 0; t < 50; ++t) {
        const auto xi = random_xi(rng);
        dict.evaluate_all(xi, out.data());
        for (int j = 0; j < dict.size(); ++j) CHECK(out[j] == doctest::Approx(dict.functions()[j](xi)).epsilon(1e-12));
    }
    // Lipschitz constants bound sampled difference quotients
    for (int t = 0; t < 200; ++t) {
        const auto x = random_xi(rng);
        ProjectivePoint y = x;
        y.base.u = wrap_unit(y.base.u + 1e-4);
        y.dir.theta = wrap_angle(y.dir.theta + 2e-4);
        const double dist = projective_distance(x, y);
        for (const auto& g : dict.functions()) CHECK(std::abs(g(x) - g(y)) <= g.lipschitz * dist * (1 + 1e-6));
    }
}

TEST_CASE("weak star distance axioms and bounds") {
    const auto dict = TestDictionary::trig();
    std::mt19937_64 rng(4);
    const auto mu = random_measure(rng, 30);
    CHECK(weak_star_distance(mu, mu, dict) == 0.0);
    for (int t = 0; t < 1000; ++t) {
        const auto a = random_measure(rng, 4), b = random_measure(rng, 4), c = random_measure(rng, 4);
        const double ab = weak_star_distance(a, b, dict), bc = weak_star_distance(b, c, dict),
                     ac = weak_star_distance(a, c, dict);
        CHECK(ab >= 0.0);
        CHECK(ab == weak_star_distance(b, a, dict));
        CHECK(ac <= ab + bc + 1e-12);
    }
    for (int t = 0; t < 200; ++t) {
        const auto x = random_xi(rng), y = random_xi(rng);
        const EmpiricalMeasure dx{{{x, 1.0}}}, dy{{{y, 1.0}}};
        CHECK(weak_star_distance(dx, dy, dict) <= dict.lipschitz_sum() * projective_distance(x, y) + 1e-12);
    }
    // permuted atoms give the same moments up to summation order
    auto perm = mu;
    std::reverse(perm.atoms.begin(), perm.atoms.end());
    CHECK(weak_star_distance(mu, perm, dict) <= 1e-14);
    auto m = moment_vector(mu, dict);
    auto n = moment_vector(perm, dict);
    n.version = "other";
    CHECK_THROWS_AS(weak_star_distance(m, n, dict), PreconditionError);
}

TEST_CASE("cat map empirical measures equidistribute") {
    const auto cat = SurfaceMap::cat();
    const auto a = empirical_measure(cat, kSea, 10000);
    const auto b = empirical_measure(cat, {{0.7, 0.2}, {1.3}}, 10000);
    CHECK(weak_star_distance(a, b, TestDictionary::trig()) < 0.05);
}

TEST_CASE("decomposition of degenerate models") {
    const auto cat = SurfaceMap::cat();
    const auto d = decompose(cat, {{0.1, 0.3}, {kUnstable}}, 2000, {0.1, 0.5}, {10, 50});
    CHECK(d.beta == 1.0);
    CHECK(d.mu0_hat.empty());
    CHECK(d.mu1_hat.atoms.size() == d.p_n.atoms.size());
    for (size_t i = 0; i < d.p_n.atoms.size(); ++i) {
        CHECK(d.mu1_hat.atoms[i].point == d.p_n.atoms[i].point);
        CHECK(d.mu1_hat.atoms[i].weight == doctest::Approx(d.p_n.atoms[i].weight).epsilon(1e-15));
    }
    const auto ic = check_item_c(d, phi_sup(cat, 32));
    CHECK(ic.pass);
    std::mt19937_64 rng(5);
    const auto id = check_item_d(cat, d, 50, 100, rng);
    CHECK(id.applicable);
    CHECK(id.fraction_positive == 1.0);
    CHECK(id.min_average == doctest::Approx(kLam).epsilon(1e-10));

    const auto idm = SurfaceMap::identity();
    const auto e = decompose(idm, {{0.3, 0.7}, {1.0}}, 500, {0.1, 0.5}, {10, 50});
    CHECK(e.beta == 0.0);
    CHECK(e.mu1_hat.empty());
    CHECK(e.mu0_hat.total_mass() == doctest::Approx(1.0));
    const auto ec = check_item_c(e, 0.0);
    CHECK(ec.pass);
    CHECK(ec.residual == 0.0);
    CHECK_FALSE(check_item_d(idm, e, 10, 10, rng).applicable);
}

TEST_CASE("standard map decomposition") {
    const auto& d = standard_run();
    CHECK(d.suffix_positive);
    CHECK(d.n == 99987);
    CHECK(d.beta == 0.94564293358136553);
    // algebra: (1 - beta) mu0 + beta mu1 = p_n atomwise
    CHECK((1.0 - d.beta) * d.mu0_hat.total_mass() + d.beta * d.mu1_hat.total_mass() ==
          doctest::Approx(d.p_n.total_mass()).epsilon(1e-9));
    CHECK(d.mu0_hat.atoms.size() + d.mu1_hat.atoms.size() == d.p_n.atoms.size());
    // monotone table
    const auto& t = d.table;
    for (size_t i = 0; i < t.alphas.size(); ++i)
        for (size_t j = 0; j < t.Ls.size(); ++j) {
            if (i + 1 < t.alphas.size()) CHECK(t.mass[i][j] <= t.mass[i + 1][j]);
            if (j + 1 < t.Ls.size()) CHECK(t.mass[i][j] >= t.mass[i][j + 1]);
        }
    const auto f = SurfaceMap::standard(1.2);
    const double bound = std::max(phi_sup(f, 128), d.orbit_phi_sup);
    const auto ic = check_item_c(d, bound);
    CHECK(ic.applicable);
    CHECK(ic.pass);
    CHECK(std::abs(ic.residual) <= 0.1 + bound / 50);
    for (const auto& e : ic.entries) {
        CHECK(e.integral >= -bound / e.L - 1e-12);
        CHECK(e.integral <= e.alpha + 1e-12);
    }
    std::mt19937_64 rng(7);
    const auto id = check_item_d(f, d, 200, 10000, rng);
    CHECK(id.fraction_positive >= 0.9);
    CHECK(id.min_average == 0.13367313673759315);
}

TEST_CASE("non-stabilizing grids are reported") {
    const auto f = SurfaceMap::standard(1.2);
    CHECK_THROWS_AS(decompose(f, kSea, 20000, {0.02, 0.5}, {5, 200}, {1e-6, false}), NonStabilization);
}

TEST_CASE("pushforward") {
    std::mt19937_64 rng(8);
    const auto mu = random_measure(rng, 40);
    const auto base = pushforward(mu);
    CHECK(base.atoms.size() == mu.atoms.size());
    CHECK(base.total_mass() == doctest::Approx(mu.total_mass()).epsilon(1e-15));
    double lhs = 0.0, rhs = 0.0;
    for (const auto& a : mu.atoms) lhs += a.weight * std::cos(kTwoPi * (a.point.base.u + 2 * a.point.base.v));
    for (const auto& [x, w] : base.atoms) rhs += w * std::cos(kTwoPi * (x.u + 2 * x.v));
    CHECK(lhs == rhs);
}

TEST_CASE("exponent of measures") {
    const auto cat = SurfaceMap::cat();
    const auto scan_cat = periodic_orbit_scan(cat, 1, 8);
    const auto mu = empirical_measure(cat, {{0.1, 0.3}, {kUnstable}}, 1000);
    CHECK(lyapunov_of_measure(cat, mu, scan_cat) == doctest::Approx(kLam).epsilon(1e-10));
    const auto id = SurfaceMap::identity();
    CHECK_THROWS_AS(lyapunov_of_measure(id, empirical_measure(id, kSea, 10), periodic_orbit_scan(id, 1, 4)),
                    HypothesisViolation);
    const auto ss = SurfaceMap::source_sink(0.5);
    const auto scan = periodic_orbit_scan(ss, 1, 8);
    const EmpiricalMeasure at_source{{{{{0.0, 0.0}, {0.4}}, 1.0}}};
    CHECK(at_source.integrate_phi(ss) > 0.0);
    CHECK_THROWS_AS(lyapunov_of_measure(ss, at_source, scan), HypothesisViolation);
}

TEST_CASE("periodic orbit scan") {
    const auto cat = periodic_orbit_scan(SurfaceMap::cat(), 1, 8);
    REQUIRE(cat.orbits.size() == 1);
    CHECK(cat.orbits[0].points[0] == SurfacePoint{0.0, 0.0});
    CHECK(cat.orbits[0].kind == OrbitKind::Saddle);
    CHECK(cat.repelling_points().empty());
    const auto id = periodic_orbit_scan(SurfaceMap::identity(), 1, 4);
    CHECK(id.degenerate_all_periodic);
    const auto ss = periodic_orbit_scan(SurfaceMap::source_sink(0.5), 1, 8);
    REQUIRE_FALSE(ss.repelling_points().empty());
    CHECK(torus_distance(ss.repelling_points()[0], {0.0, 0.0}) < 1e-12);

    // regression record, K = 1.2, periods up to 2
    const auto st = periodic_orbit_scan(SurfaceMap::standard(1.2), 2, 16);
    REQUIRE(st.orbits.size() == 4);
    CHECK(st.orbits[0].period == 1);
    CHECK(st.orbits[0].kind == OrbitKind::Saddle);
    CHECK(st.orbits[0].modulus_hi == doctest::Approx(2.8489995996796798).epsilon(1e-12));
    CHECK(st.orbits[1].period == 1);
    CHECK(st.orbits[1].kind == OrbitKind::Elliptic);
    CHECK(st.orbits[1].points[0].u == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(st.orbits[2].period == 2);
    CHECK(st.orbits[2].kind == OrbitKind::Elliptic);
    CHECK(st.orbits[3].period == 2);
    CHECK(st.orbits[3].kind == OrbitKind::Saddle);
    CHECK(st.orbits[3].points[0].u == doctest::Approx(0.2042155656414657).epsilon(1e-12));
    CHECK(st.orbits[3].modulus_hi == doctest::Approx(3.1614670576093378).epsilon(1e-12));
}

TEST_CASE("entropy reference") {
    CHECK(*entropy_reference(SurfaceMap::cat()) == doctest::Approx(kLam).epsilon(1e-15));
    CHECK(*entropy_reference(SurfaceMap::identity()) == 0.0);
    CHECK_FALSE(entropy_reference(SurfaceMap::standard(1.2)).has_value());
}

TEST_CASE("clustering") {
    const auto dict = TestDictionary::trig();
    auto params = ParameterSet::midpoint_grid(10);
    params.member.assign(10, 1);
    const auto cat = SurfaceMap::cat();
    const auto same = moment_vector(empirical_measure(cat, kSea, 100), dict);
    std::vector<std::vector<MomentVector>> all(10, {same});
    const auto r = cluster_parameters(params, all, dict, 0.05);
    CHECK(r.selected.member == params.member);
    CHECK(r.ratio == 1.0);
    CHECK(r.cover_size == 1);

    const EmpiricalMeasure left{{{{{0.1, 0.1}, {0.0}}, 1.0}}}, right{{{{{0.6, 0.6}, {1.5}}, 1.0}}};
    std::vector<std::vector<MomentVector>> split;
    for (int i = 0; i < 10; ++i) split.push_back({moment_vector(i < 4 ? left : right, dict)});
    const auto s = cluster_parameters(params, split, dict, 0.05);
    CHECK(s.selected.member_indices() == std::vector<int>{4, 5, 6, 7, 8, 9});
    CHECK(s.cover_size == 2);
    CHECK(s.ratio >= 1.0 / (s.cover_size * s.cover_size));
}

TEST_CASE("heavy cells and color separation") {
    std::mt19937_64 rng(12);
    const auto mu = random_measure(rng, 500);
    const auto cells = heavy_cells(mu, 0.1, 8, 8, 4);
    CHECK(cells.mass(mu) > (1.0 - 0.01) * mu.total_mass());
    for (const auto& a : mu.atoms) CHECK(cells.cell_index(a.point) >= 0);
    const ProjectivePoint c = cells.cell_center(5);
    CHECK(cells.cell_index(c) == 5);
    std::vector<CellSet> one{cells};
    CHECK(separate_colors(SurfaceMap::cat(), one, {3}) == 0);
    std::vector<CellSet> two{cells, cells};
    separate_colors(SurfaceMap::identity(), two, {1, 1});
    // identity: every cell of the first color hits itself, so the second color loses all shared cells
    CHECK(two[1].count() == 0);
}
