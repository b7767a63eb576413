#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "srb/curve.hpp"
#include "srb/orbit_analysis.hpp"
#include "srb/surface_map.hpp"

namespace srb {

/// psi(s) = a + b s with psi([0,1]) inside [0,1].
struct Reparametrization {
    double a = 0.0;
    double b = 1.0;

    double lo() const { return std::min(a, a + b); }
    double hi() const { return std::max(a, a + b); }
    /// this o inner.
    Reparametrization compose(const Reparametrization& inner) const { return {a + b * inner.a, b * inner.b}; }
    bool operator==(const Reparametrization&) const = default;
};

/// Certified size of f^mark o sigma o psi. `inherited` marks bounds obtained by affine scaling
/// from an ancestor piece rather than by direct evaluation.
struct SizeCertificate {
    int mark = 0;
    double eps = 0.0;
    double eps_hat = 0.0;
    bool inherited = false;
};

struct AdmissibleFamily {
    std::vector<Reparametrization> members;
    ParameterSet covered_set;
    std::vector<int> schedule;
    /// sizes[i][j]: certificate of member i at schedule[j].
    std::vector<std::vector<SizeCertificate>> sizes;
    /// Number of pieces alive after each schedule mark.
    std::vector<int> counts_per_mark;
    double eps = 0.0;
    double eps_hat = 0.0;
    int N = 0;

    int card() const { return int(members.size()); }
    /// Every covered sample lies in the closed image of some member.
    bool covers() const;
    /// Every certificate is within (eps, eps_hat) and the schedule is valid for N.
    bool certified() const;
};

struct SubdivisionOptions {
    int r = 8;
    /// Evaluation points per piece for the size test; 2*piece_grid-1 in verify mode.
    int piece_grid = 33;
    int depth_cap = 60;
    bool verify = false;

    int grid() const { return verify ? 2 * piece_grid - 1 : piece_grid; }
};

/// Subdivides the initial pieces along the schedule so that every surviving piece has size at
/// most (eps, eps_hat) at every mark; pieces whose image misses the covered set are dropped.
/// Deterministic: the output order is the left-to-right order of the parameter intervals.
AdmissibleFamily subdivide_along_schedule(const RegularCurve& curve, const SurfaceMap& f,
                                          const ParameterSet& covered, const std::vector<int>& schedule,
                                          double eps, double eps_hat, int N, const SubdivisionOptions& opts);

/// One Yomdin step: pieces certified at times 0 and 1, kept if some sample parameter s has
/// f(sigma(s)) within radius.first of the target base point and f-hat within radius.second
/// of the target direction. Without a target every sample is kept.
AdmissibleFamily yomdin_subdivide(const RegularCurve& curve, const SurfaceMap& f, double eps, double eps_hat,
                                  const std::optional<ProjectivePoint>& target,
                                  std::pair<double, double> radius, int grid, const SubdivisionOptions& opts);

/// Marks 0, N, 2N, ..., n.
std::vector<int> regular_schedule(int n, int N);

AdmissibleFamily admissible_family(const RegularCurve& curve, const SurfaceMap& f, const ParameterSet& T,
                                   int n, int N, double eps, double eps_hat, const SubdivisionOptions& opts);

/// Both sides of an inequality in log form; margin = rhs - lhs for upper bounds and
/// lhs - rhs for lower bounds, so a pass always has margin >= 0.
struct BoundCheck {
    bool pass = false;
    bool covering_ok = true;
    double log_card = 0.0;
    double log_bound = 0.0;
    double margin = 0.0;
};

/// Card >= rho^(2n) exp(lambda_min n) min|sigma'|. Fails without evaluation if the family does
/// not cover its declared set.
BoundCheck lower_bound_check(const AdmissibleFamily& family, double rho, double lambda_min,
                             const RegularCurve& curve);

/// Entropy function H(t) = t log(1/t) + (1-t) log(1/(1-t)), H(0) = 0.
double entropy_H(double t);

/// c = lambda_hat/(r-1) + 4 eta + H(10 gamma).
double upper_constant(double lambda_hat, int r, double eta, double gamma);

/// sum of Card <= exp(beta h n + c n).
BoundCheck upper_bound_check(const std::vector<const AdmissibleFamily*>& families, double beta, double h,
                             double eta, double gamma, int r, int n, double lambda_hat);

}  // namespace srb
