#include "srb/kernels.hpp"

#include <exception>

#include "kernel_items.hpp"

namespace srb::kernels {

namespace {

// Runs body(i) for i in [0, n) in parallel; the exception of the lowest failing index is rethrown.
template <class Body>
void parallel_for(long n, Body body) {
    std::vector<std::exception_ptr> errors(n > 0 ? n : 0);
    bool failed = false;
#pragma omp parallel for schedule(dynamic, 16) reduction(|| : failed)
    for (long i = 0; i < n; ++i) {
        try {
            body(i);
        } catch (...) {
            errors[i] = std::current_exception();
            failed = true;
        }
    }
    if (failed)
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
}

}  // namespace

std::vector<std::uint8_t> tn_membership(const SurfaceMap& f, const RegularCurve& curve,
                                        const std::vector<double>& samples, int n, double lambda_min,
                                        double lambda_max) {
    std::vector<std::uint8_t> out(samples.size());
    parallel_for(long(samples.size()), [&](long i) {
        out[i] = detail::tn_member(f, curve, samples[i], n, lambda_min, lambda_max);
    });
    return out;
}

std::vector<double> curve_exponents(const SurfaceMap& f, const RegularCurve& curve,
                                    const std::vector<double>& samples, int n) {
    std::vector<double> out(samples.size());
    parallel_for(long(samples.size()), [&](long i) { out[i] = detail::curve_exponent(f, curve, samples[i], n); });
    return out;
}

double max_log_projective_norm(const SurfaceMap& f, int n, const DilationGrid& grid) {
    const long total = long(grid.nu) * grid.nv * grid.ntheta;
    std::vector<double> vals(total);
    parallel_for(total, [&](long i) { vals[i] = log_projective_norm(f, detail::dilation_grid_point(grid, i), n); });
    double best = -INFINITY;
    for (double v : vals) best = std::max(best, v);
    return best;
}

std::vector<double> dictionary_moments(const TestDictionary& dict, const EmpiricalMeasure& mu) {
    const size_t m = mu.atoms.size(), d = dict.size();
    const long chunks = long((m + detail::kMomentChunk - 1) / detail::kMomentChunk);
    std::vector<double> partial(size_t(chunks) * d);
    parallel_for(chunks, [&](long c) {
        const size_t lo = size_t(c) * detail::kMomentChunk;
        detail::moments_chunk(dict, mu, lo, std::min(m, lo + detail::kMomentChunk), &partial[size_t(c) * d]);
    });
    std::vector<double> out(d, 0.0);
    for (long c = 0; c < chunks; ++c)
        for (size_t j = 0; j < d; ++j) out[j] += partial[size_t(c) * d + j];
    return out;
}

std::vector<double> forward_averages(const SurfaceMap& f, const std::vector<ProjectivePoint>& starts, int horizon) {
    std::vector<double> out(starts.size());
    parallel_for(long(starts.size()), [&](long i) { out[i] = detail::forward_average(f, starts[i], horizon); });
    return out;
}

std::vector<std::optional<SurfacePoint>> newton_periodic(const SurfaceMap& f, const std::vector<SurfacePoint>& seeds,
                                                         int p) {
    std::vector<std::optional<SurfacePoint>> out(seeds.size());
    parallel_for(long(seeds.size()), [&](long i) { out[i] = detail::newton_periodic_one(f, seeds[i], p); });
    return out;
}

std::vector<Piece> subdivide_mark(const RegularCurve& curve, const SurfaceMap& f, const CoverTargets& targets,
                                  const std::vector<Piece>& pieces, int mark, double eps, double eps_hat,
                                  const SubdivisionOptions& opts) {
    std::vector<std::vector<Piece>> parts(pieces.size());
    parallel_for(long(pieces.size()), [&](long i) {
        parts[i] = detail::refine_piece(curve, f, targets, pieces[i], mark, eps, eps_hat, opts);
    });
    std::vector<Piece> out;
    for (auto& p : parts)
        for (auto& q : p) out.push_back(std::move(q));
    return out;
}

}  // namespace srb::kernels
