#pragma once

// Single-threaded reference versions of the kernels in kernels.hpp.

#include "srb/kernels.hpp"

namespace srb::serial {

std::vector<std::uint8_t> tn_membership(const SurfaceMap& f, const RegularCurve& curve,
                                        const std::vector<double>& samples, int n, double lambda_min,
                                        double lambda_max);
std::vector<double> curve_exponents(const SurfaceMap& f, const RegularCurve& curve,
                                    const std::vector<double>& samples, int n);
double max_log_projective_norm(const SurfaceMap& f, int n, const DilationGrid& grid);
std::vector<double> dictionary_moments(const TestDictionary& dict, const EmpiricalMeasure& mu);
std::vector<double> forward_averages(const SurfaceMap& f, const std::vector<ProjectivePoint>& starts, int horizon);
std::vector<std::optional<SurfacePoint>> newton_periodic(const SurfaceMap& f, const std::vector<SurfacePoint>& seeds,
                                                         int p);
std::vector<Piece> subdivide_mark(const RegularCurve& curve, const SurfaceMap& f, const CoverTargets& targets,
                                  const std::vector<Piece>& pieces, int mark, double eps, double eps_hat,
                                  const SubdivisionOptions& opts);

}  // namespace srb::serial
