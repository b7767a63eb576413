#include "srb/reparam.hpp"

#include <algorithm>
#include <cmath>

#include "srb/dynamics.hpp"
#include "srb/error.hpp"
#include "srb/kernels.hpp"

namespace srb {

bool AdmissibleFamily::covers() const {
    std::vector<std::pair<double, double>> iv;
    iv.reserve(members.size());
    for (const auto& m : members) iv.emplace_back(m.lo(), m.hi());
    std::sort(iv.begin(), iv.end());
    size_t k = 0;
    double reach = -INFINITY;
    for (double t : covered_set.member_values()) {
        while (k < iv.size() && iv[k].first <= t) reach = std::max(reach, iv[k++].second);
        if (!(reach >= t)) return false;
    }
    return true;
}

bool AdmissibleFamily::certified() const {
    if (schedule.empty() || schedule.front() != 0) return false;
    for (size_t j = 1; j < schedule.size(); ++j) {
        const int gap = schedule[j] - schedule[j - 1];
        if (gap <= 0 || (N > 0 && gap > N)) return false;
    }
    if (sizes.size() != members.size()) return false;
    for (const auto& row : sizes) {
        if (row.size() != schedule.size()) return false;
        for (size_t j = 0; j < row.size(); ++j)
            if (row[j].mark != schedule[j] || !(row[j].eps <= eps) || !(row[j].eps_hat <= eps_hat)) return false;
    }
    return true;
}

AdmissibleFamily subdivide_along_schedule(const RegularCurve& curve, const SurfaceMap& f,
                                          const ParameterSet& covered, const std::vector<int>& schedule,
                                          double eps, double eps_hat, int N, const SubdivisionOptions& opts) {
    if (opts.r < 1 || opts.r > kMaxOrder || opts.r > f.order())
        throw PreconditionError("subdivision: order exceeds available jets");
    if (schedule.empty() || schedule.front() != 0) throw PreconditionError("schedule must start at 0");
    AdmissibleFamily fam;
    fam.covered_set = covered;
    fam.schedule = schedule;
    fam.eps = eps;
    fam.eps_hat = eps_hat;
    fam.N = N;

    CoverTargets targets{covered.member_values()};
    std::vector<Piece> pieces{Piece{}};
    for (int mark : schedule) {
        pieces = kernels::subdivide_mark(curve, f, targets, pieces, mark, eps, eps_hat, opts);
        fam.counts_per_mark.push_back(int(pieces.size()));
    }
    fam.members.reserve(pieces.size());
    fam.sizes.reserve(pieces.size());
    for (auto& p : pieces) {
        fam.members.push_back(p.psi);
        fam.sizes.push_back(std::move(p.certs));
    }
    return fam;
}

AdmissibleFamily yomdin_subdivide(const RegularCurve& curve, const SurfaceMap& f, double eps, double eps_hat,
                                  const std::optional<ProjectivePoint>& target,
                                  std::pair<double, double> radius, int grid, const SubdivisionOptions& opts) {
    ParameterSet covered = ParameterSet::midpoint_grid(grid);
    for (int i = 0; i < grid; ++i) {
        if (!target) {
            covered.member[i] = 1;
            continue;
        }
        const ProjectivePoint img = projective_apply(f, curve.lifted_point(covered.samples[i]));
        covered.member[i] = torus_distance(img.base, target->base) <= radius.first &&
                            std::abs(angle_delta(img.dir.theta, target->dir.theta)) <= radius.second;
    }
    return subdivide_along_schedule(curve, f, covered, {0, 1}, eps, eps_hat, 1, opts);
}

std::vector<int> regular_schedule(int n, int N) {
    if (n < 0 || N < 1) throw PreconditionError("schedule needs n >= 0 and N >= 1");
    std::vector<int> s;
    for (int m = 0; m < n; m += N) s.push_back(m);
    s.push_back(n);
    return s;
}

AdmissibleFamily admissible_family(const RegularCurve& curve, const SurfaceMap& f, const ParameterSet& T,
                                   int n, int N, double eps, double eps_hat, const SubdivisionOptions& opts) {
    return subdivide_along_schedule(curve, f, T, regular_schedule(n, N), eps, eps_hat, N, opts);
}

BoundCheck lower_bound_check(const AdmissibleFamily& family, double rho, double lambda_min,
                             const RegularCurve& curve) {
    BoundCheck c;
    c.covering_ok = family.covers();
    if (!c.covering_ok) return c;
    const int n = family.schedule.empty() ? 0 : family.schedule.back();
    c.log_card = family.card() > 0 ? std::log(double(family.card())) : -INFINITY;
    c.log_bound = 2.0 * n * std::log(rho) + lambda_min * n + std::log(curve.min_speed());
    c.margin = c.log_card - c.log_bound;
    c.pass = c.log_card >= c.log_bound;
    return c;
}

double entropy_H(double t) {
    auto term = [](double x) { return x > 0.0 ? -x * std::log(x) : 0.0; };
    return term(t) + term(1.0 - t);
}

double upper_constant(double lambda_hat, int r, double eta, double gamma) {
    return lambda_hat / (r - 1) + 4.0 * eta + entropy_H(10.0 * gamma);
}

BoundCheck upper_bound_check(const std::vector<const AdmissibleFamily*>& families, double beta, double h,
                             double eta, double gamma, int r, int n, double lambda_hat) {
    BoundCheck c;
    double total = 0.0;
    for (const auto* f : families) total += f->card();
    c.log_card = total > 0.0 ? std::log(total) : -INFINITY;
    c.log_bound = beta * h * n + upper_constant(lambda_hat, r, eta, gamma) * n;
    c.margin = c.log_bound - c.log_card;
    c.pass = c.log_card <= c.log_bound;
    return c;
}

}  // namespace srb
