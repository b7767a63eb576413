#include "srb/serial.hpp"

#include "kernel_items.hpp"

namespace srb::serial {

std::vector<std::uint8_t> tn_membership(const SurfaceMap& f, const RegularCurve& curve,
                                        const std::vector<double>& samples, int n, double lambda_min,
                                        double lambda_max) {
    std::vector<std::uint8_t> out;
    out.reserve(samples.size());
    for (double s : samples) out.push_back(detail::tn_member(f, curve, s, n, lambda_min, lambda_max));
    return out;
}

std::vector<double> curve_exponents(const SurfaceMap& f, const RegularCurve& curve,
                                    const std::vector<double>& samples, int n) {
    std::vector<double> out;
    out.reserve(samples.size());
    for (double s : samples) out.push_back(detail::curve_exponent(f, curve, s, n));
    return out;
}

double max_log_projective_norm(const SurfaceMap& f, int n, const DilationGrid& grid) {
    const long total = long(grid.nu) * grid.nv * grid.ntheta;
    double best = -INFINITY;
    for (long i = 0; i < total; ++i)
        best = std::max(best, log_projective_norm(f, detail::dilation_grid_point(grid, i), n));
    return best;
}

std::vector<double> dictionary_moments(const TestDictionary& dict, const EmpiricalMeasure& mu) {
    // same chunking as the parallel kernel so the floating-point sums agree exactly
    const size_t m = mu.atoms.size(), d = dict.size();
    std::vector<double> out(d, 0.0), part(d);
    for (size_t lo = 0; lo < m; lo += detail::kMomentChunk) {
        detail::moments_chunk(dict, mu, lo, std::min(m, lo + detail::kMomentChunk), part.data());
        for (size_t j = 0; j < d; ++j) out[j] += part[j];
    }
    return out;
}

std::vector<double> forward_averages(const SurfaceMap& f, const std::vector<ProjectivePoint>& starts, int horizon) {
    std::vector<double> out;
    out.reserve(starts.size());
    for (const auto& s : starts) out.push_back(detail::forward_average(f, s, horizon));
    return out;
}

std::vector<std::optional<SurfacePoint>> newton_periodic(const SurfaceMap& f, const std::vector<SurfacePoint>& seeds,
                                                         int p) {
    std::vector<std::optional<SurfacePoint>> out;
    out.reserve(seeds.size());
    for (const auto& s : seeds) out.push_back(detail::newton_periodic_one(f, s, p));
    return out;
}

std::vector<Piece> subdivide_mark(const RegularCurve& curve, const SurfaceMap& f, const CoverTargets& targets,
                                  const std::vector<Piece>& pieces, int mark, double eps, double eps_hat,
                                  const SubdivisionOptions& opts) {
    std::vector<Piece> out;
    for (const auto& p : pieces)
        for (auto& q : detail::refine_piece(curve, f, targets, p, mark, eps, eps_hat, opts)) out.push_back(std::move(q));
    return out;
}

}  // namespace srb::serial
