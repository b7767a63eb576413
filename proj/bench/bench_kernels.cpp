// Serial reference vs OpenMP kernels on the same inputs.
#include <benchmark/benchmark.h>

#include <random>

#include "srb/kernels.hpp"
#include "srb/serial.hpp"

namespace {

const srb::SurfaceMap& standard() {
    static const auto f = srb::SurfaceMap::standard(1.2);
    return f;
}

const srb::RegularCurve& segment() {
    static const auto c = srb::RegularCurve::segment({0.1, 0.2}, 0.4, 0.25);
    return c;
}

std::vector<double> grid(int n) {
    std::vector<double> s(n);
    for (int i = 0; i < n; ++i) s[i] = (i + 0.5) / n;
    return s;
}

std::vector<srb::ProjectivePoint> starts(int n) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<srb::ProjectivePoint> out(n);
    for (auto& p : out) p = {{u(rng), u(rng)}, {3.14159 * u(rng)}};
    return out;
}

template <bool Parallel>
void BM_CurveExponents(benchmark::State& st) {
    const auto s = grid(int(st.range(0)));
    for (auto _ : st) {
        auto v = Parallel ? srb::kernels::curve_exponents(standard(), segment(), s, 20)
                          : srb::serial::curve_exponents(standard(), segment(), s, 20);
        benchmark::DoNotOptimize(v.data());
    }
}

template <bool Parallel>
void BM_Dilation(benchmark::State& st) {
    const srb::DilationGrid g{int(st.range(0)), int(st.range(0)), int(st.range(0)) / 2};
    for (auto _ : st) {
        double v = Parallel ? srb::kernels::max_log_projective_norm(standard(), 8, g)
                            : srb::serial::max_log_projective_norm(standard(), 8, g);
        benchmark::DoNotOptimize(v);
    }
}

template <bool Parallel>
void BM_ForwardAverages(benchmark::State& st) {
    const auto p = starts(int(st.range(0)));
    for (auto _ : st) {
        auto v = Parallel ? srb::kernels::forward_averages(standard(), p, 1000)
                          : srb::serial::forward_averages(standard(), p, 1000);
        benchmark::DoNotOptimize(v.data());
    }
}

template <bool Parallel>
void BM_Moments(benchmark::State& st) {
    const auto dict = srb::TestDictionary::trig();
    srb::EmpiricalMeasure mu;
    for (const auto& p : starts(int(st.range(0)))) mu.atoms.push_back({p, 1.0 / st.range(0)});
    for (auto _ : st) {
        auto v = Parallel ? srb::kernels::dictionary_moments(dict, mu) : srb::serial::dictionary_moments(dict, mu);
        benchmark::DoNotOptimize(v.data());
    }
}

}  // namespace

BENCHMARK(BM_CurveExponents<false>)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CurveExponents<true>)->Arg(4096)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Dilation<false>)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Dilation<true>)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ForwardAverages<false>)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForwardAverages<true>)->Arg(1024)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Moments<false>)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Moments<true>)->Arg(20000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
