#include <doctest.h>
#include <omp.h>

#include <cstring>
#include <random>

#include "srb/error.hpp"
#include "srb/kernels.hpp"
#include "srb/serial.hpp"

using namespace srb;

namespace {

template <class T>
bool same_bits(const std::vector<T>& a, const std::vector<T>& b) {
    return a.size() == b.size() && (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(T)) == 0);
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

std::vector<double> grid(int n) {
    std::vector<double> s(n);
    for (int i = 0; i < n; ++i) s[i] = (i + 0.5) / n;
    return s;
}

struct Threads {
    int saved = omp_get_max_threads();
    explicit Threads(int n) { omp_set_num_threads(n); }
    ~Threads() { omp_set_num_threads(saved); }
};

const SurfaceMap kStd = SurfaceMap::standard(1.2);
const RegularCurve kSeg = RegularCurve::segment({0.1, 0.2}, 0.4, 0.25);

}  // namespace

TEST_CASE("parallel kernels are bitwise equal to the serial reference") {
    for (int threads : {1, 3, 8}) {
        Threads t(threads);
        const auto s = grid(1000);
        CHECK(same_bits(kernels::tn_membership(kStd, kSeg, s, 12, 0.2, 1.2),
                        serial::tn_membership(kStd, kSeg, s, 12, 0.2, 1.2)));
        CHECK(same_bits(kernels::curve_exponents(kStd, kSeg, s, 20), serial::curve_exponents(kStd, kSeg, s, 20)));
        CHECK(same_bits(kernels::max_log_projective_norm(kStd, 6, {16, 16, 8}),
                        serial::max_log_projective_norm(kStd, 6, {16, 16, 8})));

        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        EmpiricalMeasure mu;
        for (int i = 0; i < 10000; ++i) mu.atoms.push_back({{{u(rng), u(rng)}, {3.0 * u(rng)}}, 1e-4});
        const auto dict = TestDictionary::trig();
        CHECK(same_bits(kernels::dictionary_moments(dict, mu), serial::dictionary_moments(dict, mu)));
        CHECK(same_bits(kernels::dictionary_moments(dict, mu), dict.moments(mu)));

        std::vector<ProjectivePoint> starts;
        for (int i = 0; i < 100; ++i) starts.push_back(mu.atoms[i].point);
        CHECK(same_bits(kernels::forward_averages(kStd, starts, 300), serial::forward_averages(kStd, starts, 300)));

        std::vector<SurfacePoint> seeds;
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) seeds.push_back({i / 8.0, j / 8.0});
        const auto a = kernels::newton_periodic(kStd, seeds, 2), b = serial::newton_periodic(kStd, seeds, 2);
        REQUIRE(a.size() == b.size());
        for (size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].has_value() == b[i].has_value());
            if (a[i] && b[i]) CHECK((same_bits(a[i]->u, b[i]->u) && same_bits(a[i]->v, b[i]->v)));
        }

        CoverTargets targets{grid(512)};
        std::vector<Piece> pieces{{{0.0, 1.0}, 0, {}}};
        SubdivisionOptions opts;
        for (int mark : {0, 2, 4}) {
            const auto p = kernels::subdivide_mark(kSeg, kStd, targets, pieces, mark, 0.025, 0.5, opts);
            const auto q = serial::subdivide_mark(kSeg, kStd, targets, pieces, mark, 0.025, 0.5, opts);
            REQUIRE(p.size() == q.size());
            for (size_t i = 0; i < p.size(); ++i) {
                CHECK(p[i].psi == q[i].psi);
                CHECK(p[i].depth == q[i].depth);
                REQUIRE(p[i].certs.size() == q[i].certs.size());
                for (size_t j = 0; j < p[i].certs.size(); ++j) {
                    CHECK(same_bits(p[i].certs[j].eps, q[i].certs[j].eps));
                    CHECK(same_bits(p[i].certs[j].eps_hat, q[i].certs[j].eps_hat));
                }
            }
            pieces = p;
        }
    }
}

TEST_CASE("kernel errors surface from the lowest failing index") {
    Threads t(4);
    // zero-speed sample in the middle of the grid
    const RegularCurve bent(Polynomial{{0.35, -1.0, 1.0}}, Polynomial{{0.075, 0.75, -1.5, 1.0}});
    CHECK_THROWS_AS(kernels::tn_membership(kStd, bent, {0.1, 0.5, 0.9}, 5, 0.0, 1.0), PreconditionError);
    CHECK_THROWS_AS(serial::tn_membership(kStd, bent, {0.1, 0.5, 0.9}, 5, 0.0, 1.0), PreconditionError);
}

TEST_CASE("cover targets") {
    const CoverTargets t{{0.1, 0.4, 0.7}};
    CHECK(t.meets(0.0, 0.1));
    CHECK(t.meets(0.35, 0.45));
    CHECK_FALSE(t.meets(0.41, 0.69));
    CHECK_FALSE(t.meets(0.71, 1.0));
}
