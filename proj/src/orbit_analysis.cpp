#include "srb/orbit_analysis.hpp"

#include <cmath>

#include "srb/dynamics.hpp"
#include "srb/error.hpp"
#include "srb/kernels.hpp"

namespace srb {

ParameterSet ParameterSet::midpoint_grid(int grid) {
    if (grid < 2) throw PreconditionError("parameter grid must have at least 2 samples");
    ParameterSet p;
    p.samples.resize(grid);
    p.member.assign(grid, 0);
    p.spacing = 1.0 / grid;
    for (int i = 0; i < grid; ++i) p.samples[i] = (i + 0.5) / grid;
    return p;
}

int ParameterSet::count() const {
    int c = 0;
    for (auto m : member) c += m ? 1 : 0;
    return c;
}

std::vector<double> ParameterSet::member_values() const {
    std::vector<double> out;
    for (size_t i = 0; i < samples.size(); ++i)
        if (member[i]) out.push_back(samples[i]);
    return out;
}

std::vector<int> ParameterSet::member_indices() const {
    std::vector<int> out;
    for (size_t i = 0; i < samples.size(); ++i)
        if (member[i]) out.push_back(int(i));
    return out;
}

ParameterSet ParameterSet::restricted(const std::vector<int>& indices) const {
    ParameterSet p = *this;
    p.member.assign(samples.size(), 0);
    for (int i : indices) p.member.at(i) = 1;
    return p;
}

std::vector<double> birkhoff_sums(const PhiSequence& seq) {
    std::vector<double> s(seq.values.size() + 1, 0.0);
    for (size_t i = 0; i < seq.values.size(); ++i) s[i + 1] = s[i] + seq.values[i];
    return s;
}

bool is_alpha_neutral(const PhiSequence& seq, const SegmentInterval& seg, double alpha) {
    if (seg.start < 0 || seg.end > seq.size() || seg.start >= seg.end)
        throw PreconditionError("segment out of bounds");
    double s = 0.0;
    for (int i = 1; i <= seg.length(); ++i) {
        s += seq.values[seg.start + i - 1];
        if (s > alpha * i) return false;
    }
    return true;
}

NeutralDecomposition maximal_neutral_segments(const PhiSequence& seq, double alpha, int capL) {
    if (!(alpha > 0.0) || capL < 1) throw PreconditionError("need alpha > 0 and L >= 1");
    const int n = seq.size();
    const auto S = birkhoff_sums(seq);
    // position j "beats" t (j > t) when the segment [t, j) is not alpha-neutral at its end
    auto beats = [&](int j, int t) { return S[j] - S[t] > alpha * (j - t); };

    // next beating position for every start, via a stack of unresolved starts
    std::vector<int> next(n + 1, n + 1);
    std::vector<int> stack;
    stack.reserve(n + 1);
    for (int j = 0; j <= n; ++j) {
        while (!stack.empty() && beats(j, stack.back())) {
            next[stack.back()] = j;
            stack.pop_back();
        }
        stack.push_back(j);
    }

    NeutralDecomposition out;
    out.alpha = alpha;
    out.capL = capL;
    out.in_neutral.assign(n, 0);
    // the longest neutral segment from t is [t, next[t]-1); overlapping or adjacent ones merge
    int cur_lo = -1, cur_hi = -1;
    auto flush = [&] {
        if (cur_lo >= 0 && cur_hi - cur_lo >= capL) {
            out.maximal_segments.push_back({cur_lo, cur_hi});
            for (int i = cur_lo; i < cur_hi; ++i) out.in_neutral[i] = 1;
            out.neutral_count += cur_hi - cur_lo;
        }
    };
    for (int t = 0; t < n; ++t) {
        const int end = next[t] - 1;
        if (end <= t) continue;
        if (cur_lo >= 0 && t <= cur_hi) {
            cur_hi = std::max(cur_hi, end);
        } else {
            flush();
            cur_lo = t;
            cur_hi = end;
        }
    }
    flush();
    return out;
}

double neutral_mass(const PhiSequence& seq, double alpha, int capL) {
    return maximal_neutral_segments(seq, alpha, capL).mass();
}

std::vector<int> pliss_times(const PhiSequence& seq, double lambda_min) {
    const int n = seq.size();
    const auto S = birkhoff_sums(seq);
    // n qualifies iff it is at least as high as the best earlier index in S_m - lambda m;
    // comparisons are made pairwise against the current leader
    std::vector<int> out{0};
    int leader = 0;
    for (int j = 1; j <= n; ++j) {
        if (S[j] - S[leader] >= lambda_min * (j - leader)) {
            out.push_back(j);
            leader = j;
        }
    }
    return out;
}

bool suffix_positive(const PhiSequence& seq) {
    const auto t = pliss_times(seq, 0.0);
    return t.back() == seq.size();
}

PhiSequence curve_phi_sequence(const SurfaceMap& f, const RegularCurve& curve, double s, int n) {
    PhiSequence seq;
    seq.origin = curve.lifted_point(s);
    seq.values.resize(n);
    ProjectivePoint xi = *seq.origin;
    for (int i = 0; i < n; ++i) xi = projective_step(f, xi, seq.values[i]);
    return seq;
}

ParameterSet sample_Tn(const SurfaceMap& f, const RegularCurve& curve, int n, double lambda_min,
                       double lambda_max, int grid) {
    if (n < 1) throw PreconditionError("sample_Tn: n must be >= 1");
    ParameterSet p = ParameterSet::midpoint_grid(grid);
    p.member = kernels::tn_membership(f, curve, p.samples, n, lambda_min, lambda_max);
    return p;
}

GoodTime find_good_time(const SurfaceMap& f, const RegularCurve& curve, double rho, double lambda_min,
                        double lambda_max, int n_lo, int n_hi, int grid) {
    if (!(rho > 0.0 && rho < 1.0)) throw PreconditionError("find_good_time: need 0 < rho < 1");
    GoodTime g;
    for (int n = std::max(n_lo, 1); n <= n_hi; ++n) {
        ParameterSet T = sample_Tn(f, curve, n, lambda_min, lambda_max, grid);
        const double m = T.measure();
        g.trace.emplace_back(n, m);
        if (m > std::pow(rho, n)) {
            g.found = true;
            g.n = n;
            g.T = std::move(T);
            break;
        }
    }
    return g;
}

}  // namespace srb
