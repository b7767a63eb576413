#pragma once

// Per-item bodies shared by the parallel kernels and their serial references.

#include <optional>
#include <vector>

#include "srb/kernels.hpp"

namespace srb::detail {

inline constexpr int kMomentChunk = 4096;

bool tn_member(const SurfaceMap& f, const RegularCurve& curve, double s, int n, double lambda_min,
               double lambda_max);
double curve_exponent(const SurfaceMap& f, const RegularCurve& curve, double s, int n);
ProjectivePoint dilation_grid_point(const DilationGrid& grid, long idx);
void moments_chunk(const TestDictionary& dict, const EmpiricalMeasure& mu, size_t lo, size_t hi, double* out);
double forward_average(const SurfaceMap& f, const ProjectivePoint& xi, int horizon);
std::optional<SurfacePoint> newton_periodic_one(const SurfaceMap& f, const SurfacePoint& seed, int p);
/// Children of one piece at one mark, in parameter order.
std::vector<Piece> refine_piece(const RegularCurve& curve, const SurfaceMap& f, const CoverTargets& targets,
                                const Piece& piece, int mark, double eps, double eps_hat,
                                const SubdivisionOptions& opts);

}  // namespace srb::detail
