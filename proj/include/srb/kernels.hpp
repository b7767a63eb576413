#pragma once

// Data-parallel kernels. Every function here has a plain-loop twin in srb::serial
// (serial.hpp) that must return bit-identical results.

#include <cstdint>
#include <optional>
#include <vector>

#include "srb/curve.hpp"
#include "srb/dynamics.hpp"
#include "srb/measure.hpp"
#include "srb/reparam.hpp"

namespace srb {

/// A reparametrization in flight during subdivision, with its certificates so far.
struct Piece {
    Reparametrization psi;
    int depth = 0;
    std::vector<SizeCertificate> certs;
};

/// Sorted parameter values a piece must meet to be kept.
struct CoverTargets {
    std::vector<double> values;
    bool meets(double lo, double hi) const;
};

namespace kernels {

std::vector<std::uint8_t> tn_membership(const SurfaceMap& f, const RegularCurve& curve,
                                        const std::vector<double>& samples, int n, double lambda_min,
                                        double lambda_max);

/// (1/n) log |Df^n restricted to sigma'(s)| at each sample.
std::vector<double> curve_exponents(const SurfaceMap& f, const RegularCurve& curve,
                                    const std::vector<double>& samples, int n);

/// log of the grid maximum of |Df-hat^n|.
double max_log_projective_norm(const SurfaceMap& f, int n, const DilationGrid& grid);

/// Moments in dictionary order; atoms are summed in fixed chunks merged in chunk order.
std::vector<double> dictionary_moments(const TestDictionary& dict, const EmpiricalMeasure& mu);

/// (1/horizon) S_horizon phi from each start.
std::vector<double> forward_averages(const SurfaceMap& f, const std::vector<ProjectivePoint>& starts, int horizon);

/// Newton solution of f^p(x) = x from each seed, or nothing if it does not converge.
std::vector<std::optional<SurfacePoint>> newton_periodic(const SurfaceMap& f, const std::vector<SurfacePoint>& seeds,
                                                         int p);

/// Refines every piece at one schedule mark; output keeps the input order, children left to right.
std::vector<Piece> subdivide_mark(const RegularCurve& curve, const SurfaceMap& f, const CoverTargets& targets,
                                  const std::vector<Piece>& pieces, int mark, double eps, double eps_hat,
                                  const SubdivisionOptions& opts);

}  // namespace kernels
}  // namespace srb
