#include <doctest.h>

#include <cmath>
#include <random>

#include "srb/dynamics.hpp"
#include "srb/error.hpp"
#include "srb/orbit_analysis.hpp"
#include "oracles.hpp"

using namespace srb;

namespace {
const double kLam = std::log((3.0 + std::sqrt(5.0)) / 2.0);
const double kUnstable = std::atan2((std::sqrt(5.0) - 1.0) / 2.0, 1.0);
const double kStable = wrap_angle(std::atan2(-(std::sqrt(5.0) + 1.0) / 2.0, 1.0));
PhiSequence seq(std::vector<double> v) { return {std::move(v), std::nullopt}; }
}  // namespace

TEST_CASE("birkhoff sums") {
    CHECK(birkhoff_sums(seq({0, 0, 0})) == std::vector<double>{0, 0, 0, 0});
    CHECK(birkhoff_sums(seq({1, -1, 2})) == std::vector<double>{0, 1, 0, 2});
    const auto orbit = projective_orbit(SurfaceMap::cat(), {{0.1, 0.3}, {kUnstable}}, 5);
    const auto S = birkhoff_sums(seq(orbit.phi));
    REQUIRE(S.size() == 6);
    for (int i = 0; i <= 5; ++i) CHECK(S[i] == doctest::Approx(i * kLam).epsilon(1e-13));
}

TEST_CASE("alpha-neutral predicate") {
    CHECK(is_alpha_neutral(seq({-1, -1, -1}), {0, 3}, 0.0));
    CHECK_FALSE(is_alpha_neutral(seq({2, -1, 2}), {0, 1}, 0.5));
    CHECK(is_alpha_neutral(seq({2, -1, 2}), {1, 3}, 0.5));
    // equality counts as neutral
    CHECK(is_alpha_neutral(seq({0.5, 0.5}), {0, 2}, 0.5));
}

TEST_CASE("maximal neutral segments on hand examples") {
    const auto a = maximal_neutral_segments(seq({-1, -1, -1}), 0.5, 1);
    REQUIRE(a.maximal_segments.size() == 1);
    CHECK(a.maximal_segments[0] == SegmentInterval{0, 3});
    const auto b = maximal_neutral_segments(seq({2, -1, 2}), 0.5, 1);
    REQUIRE(b.maximal_segments.size() == 1);
    CHECK(b.maximal_segments[0] == SegmentInterval{1, 3});
    const auto orbit = projective_orbit(SurfaceMap::cat(), {{0.1, 0.3}, {kUnstable}}, 200);
    for (int L : {1, 5, 50}) CHECK(maximal_neutral_segments(seq(orbit.phi), 0.5, L).maximal_segments.empty());
}

TEST_CASE("neutral mass on hand examples") {
    CHECK(neutral_mass(seq({-1, -0.5, -2, -0.1}), 0.3, 1) == 1.0);
    const auto orbit = projective_orbit(SurfaceMap::cat(), {{0.1, 0.3}, {kUnstable}}, 100);
    CHECK(neutral_mass(seq(orbit.phi), 0.9, 1) == 0.0);
    CHECK(neutral_mass(seq({2, -1, 2}), 0.5, 2) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("pliss times on hand examples") {
    const std::vector<int> all{0, 1, 2, 3, 4, 5};
    CHECK(pliss_times(seq({1, 1, 1, 1, 1}), 0.5) == all);
    CHECK(pliss_times(seq({0.2, 0.2, 0.2}), 0.5) == std::vector<int>{0});
    const auto s = seq({1.5, -0.5, 1.5, 1.5});
    CHECK(pliss_times(s, 0.5) == test_oracle::pliss_times(s.values, 0.5));
}

TEST_CASE("neutral segments and pliss times match brute force exhaustively up to length 8") {
    const std::vector<double> grid{-1.0, -0.5, 0.0, 0.5, 1.0};
    const std::vector<double> alphas{0.1, 0.5, 1.0};
    long mismatches = 0, cases = 0;
    for (int n = 0; n <= 8; ++n) {
        long total = 1;
        for (int i = 0; i < n; ++i) total *= 5;
        for (long code = 0; code < total; ++code) {
            std::vector<double> v(n);
            long c = code;
            for (int i = 0; i < n; ++i, c /= 5) v[i] = grid[c % 5];
            for (double a : alphas) {
                for (int L = 1; L <= std::max(1, n); L += 2) {
                    ++cases;
                    const auto d = maximal_neutral_segments(seq(v), a, L);
                    const auto o = test_oracle::neutral_flags(v, a, L);
                    if (d.in_neutral != o || d.maximal_segments != test_oracle::runs(o)) ++mismatches;
                }
                if (pliss_times(seq(v), a) != test_oracle::pliss_times(v, a)) ++mismatches;
            }
        }
    }
    CHECK(cases > 100000);
    CHECK(mismatches == 0);
}

TEST_CASE("merge closure of intersecting neutral segments") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> pick(-2, 2);
    std::uniform_int_distribution<int> len(1, 16);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> v(len(rng));
        for (auto& x : v) x = pick(rng) / 2.0;
        const int n = int(v.size());
        for (double a : {0.1, 0.5, 1.0}) {
            std::vector<SegmentInterval> neutral;
            for (int s = 0; s < n; ++s)
                for (int e = s + 1; e <= n; ++e)
                    if (is_alpha_neutral(seq(v), {s, e}, a)) neutral.push_back({s, e});
            for (const auto& p : neutral)
                for (const auto& q : neutral)
                    if (p.start < q.end && q.start < p.end)
                        CHECK(is_alpha_neutral(seq(v), {std::min(p.start, q.start), std::max(p.end, q.end)}, a));
        }
    }
}

TEST_CASE("neutral mass is monotone in alpha and L") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> g(0.1, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v(200);
        for (auto& x : v) x = g(rng);
        const std::vector<double> alphas{0.01, 0.05, 0.1, 0.3, 0.6};
        const std::vector<int> Ls{1, 3, 10, 30, 100};
        for (size_t i = 0; i < alphas.size(); ++i)
            for (size_t j = 0; j < Ls.size(); ++j) {
                const double m = neutral_mass(seq(v), alphas[i], Ls[j]);
                if (i + 1 < alphas.size()) CHECK(m <= neutral_mass(seq(v), alphas[i + 1], Ls[j]));
                if (j + 1 < Ls.size()) CHECK(m >= neutral_mass(seq(v), alphas[i], Ls[j + 1]));
            }
    }
}

TEST_CASE("suffix positivity") {
    CHECK(suffix_positive(seq({-1, 2, 0.5})));
    CHECK_FALSE(suffix_positive(seq({1, 2, -0.5})));
    CHECK(suffix_positive(seq({})));
}

TEST_CASE("parameter sets on the midpoint grid") {
    auto p = ParameterSet::midpoint_grid(4);
    CHECK(p.samples == std::vector<double>{0.125, 0.375, 0.625, 0.875});
    CHECK(p.spacing == 0.25);
    CHECK(p.count() == 0);
    p.member = {1, 0, 1, 1};
    CHECK(p.measure() == 0.75);
    CHECK(p.member_indices() == std::vector<int>{0, 2, 3});
    CHECK(p.restricted({2}).member_indices() == std::vector<int>{2});
}

TEST_CASE("sample_Tn on linear and trivial models") {
    const auto unstable = RegularCurve::segment({0.1, 0.2}, kUnstable, 0.3);
    const auto stable = RegularCurve::segment({0.1, 0.2}, kStable, 0.3);
    const auto cat = SurfaceMap::cat();
    CHECK(sample_Tn(SurfaceMap::identity(), unstable, 20, 0.1, 1.0, 64).count() == 0);
    const auto T = sample_Tn(cat, unstable, 50, 0.9, 1.0, 128);
    CHECK(T.measure() == doctest::Approx(1.0));
    // short horizon: rounding error off the stable line grows like lambda^(2n)
    CHECK(sample_Tn(cat, stable, 10, 0.0, 1.0, 128).count() == 0);
    // every member is suffix positive along its lifted orbit
    const auto f = SurfaceMap::standard(1.2);
    const auto c = RegularCurve::segment({0.1, 0.2}, 0.4, 0.25);
    const auto Ts = sample_Tn(f, c, 12, 0.2, 1.2, 256);
    for (int i : Ts.member_indices()) CHECK(suffix_positive(curve_phi_sequence(f, c, Ts.samples[i], 12)));
}

TEST_CASE("find_good_time") {
    const auto unstable = RegularCurve::segment({0.1, 0.2}, kUnstable, 0.3);
    const auto g = find_good_time(SurfaceMap::cat(), unstable, 0.9, 0.9, 1.0, 10, 60, 128);
    CHECK(g.found);
    CHECK(g.n == 10);
    CHECK_FALSE(find_good_time(SurfaceMap::identity(), unstable, 0.9, 0.1, 1.0, 10, 20, 64).found);
}

TEST_CASE("find_good_time regression on the perturbed cat map") {
    const auto c = RegularCurve::segment({0.1, 0.2}, kUnstable, 0.3);
    const auto g = find_good_time(SurfaceMap::perturbed_cat(0.02), c, 0.95, 0.85, 1.05, 10, 100, 256);
    const auto h = find_good_time(SurfaceMap::perturbed_cat(0.02), c, 0.95, 0.85, 1.05, 10, 100, 256);
    CHECK(g.found == h.found);
    CHECK(g.n == h.n);
    CHECK(g.T.member == h.T.member);
    REQUIRE(g.found);
    CHECK(g.n == test_oracle::kPerturbedGoodTime);
}
