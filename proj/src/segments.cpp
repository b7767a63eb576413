#include "srb/segments.hpp"

#include <algorithm>
#include <cmath>

#include "srb/error.hpp"

namespace srb {

const char* to_string(SegmentClass c) {
    switch (c) {
        case SegmentClass::Blank: return "blank";
        case SegmentClass::Color: return "color";
        case SegmentClass::Filler: return "filler";
    }
    return "unknown";
}

int SegmentClassification::total(SegmentClass c, int color) const {
    int t = 0;
    for (const auto& s : segments)
        if (s.cls == c && (c != SegmentClass::Color || color < 0 || s.color == color)) t += s.interval.length();
    return t;
}

SegmentClassification classify_segments(const PhiSequence& seq, const std::vector<std::uint8_t>& in_u0,
                                        const std::vector<std::vector<std::uint8_t>>& in_color, double alpha,
                                        int capL, double gamma, const std::vector<int>& color_lengths) {
    const int n = seq.size();
    if (int(in_u0.size()) != n || in_color.size() != color_lengths.size())
        throw PreconditionError("classify_segments: inconsistent input lengths");
    for (const auto& c : in_color)
        if (int(c.size()) != n) throw PreconditionError("classify_segments: inconsistent input lengths");
    int longest = 0;
    for (size_t c = 0; c < color_lengths.size(); ++c) {
        if (!(color_lengths[c] > 1.0 / gamma)) throw PreconditionError("color lengths must exceed 1/gamma");
        for (size_t d = 0; d < c; ++d)
            if (color_lengths[c] == color_lengths[d]) throw PreconditionError("color lengths must be distinct");
        longest = std::max(longest, color_lengths[c]);
    }
    if (!(capL > 2.0 * longest / gamma)) throw PreconditionError("L must exceed 2 max(n_1c) / gamma");

    SegmentClassification out;
    out.n = n;
    out.alpha = alpha;
    out.capL = capL;
    out.gamma = gamma;
    out.color_lengths = color_lengths;

    const auto nd = maximal_neutral_segments(seq, alpha, capL);
    // 0 free, 1 claimed by a neutral segment
    std::vector<std::uint8_t> claimed(n, 0);
    std::vector<ClassifiedSegment> segs;
    for (const auto& iv : nd.maximal_segments) {
        int hits = 0;
        for (int j = iv.start; j < iv.end; ++j) {
            hits += in_u0[j] ? 1 : 0;
            claimed[j] = 1;
        }
        if (hits > (1.0 - gamma) * iv.length()) {
            segs.push_back({iv, SegmentClass::Blank, -1});
        } else {
            for (int j = iv.start; j < iv.end; ++j) segs.push_back({{j, j + 1}, SegmentClass::Filler, -1});
        }
    }
    int i = 0;
    while (i < n) {
        if (claimed[i]) {
            ++i;
            continue;
        }
        bool colored = false;
        for (size_t c = 0; c < color_lengths.size() && !colored; ++c) {
            const int len = color_lengths[c];
            if (!in_color[c][i] || i + len > n) continue;
            bool free = true;
            for (int j = i; j < i + len && free; ++j) free = !claimed[j];
            if (!free) continue;
            segs.push_back({{i, i + len}, SegmentClass::Color, int(c)});
            for (int j = i; j < i + len; ++j) claimed[j] = 1;
            i += len;
            colored = true;
        }
        if (!colored) {
            segs.push_back({{i, i + 1}, SegmentClass::Filler, -1});
            claimed[i] = 1;
            ++i;
        }
    }
    std::sort(segs.begin(), segs.end(),
              [](const ClassifiedSegment& a, const ClassifiedSegment& b) { return a.interval.start < b.interval.start; });
    out.segments = std::move(segs);
    for (const auto& s : out.segments) out.type_theta.push_back(s.interval.start);
    return out;
}

SizeBudgetReport size_budget_check(const SegmentClassification& cls, double beta,
                                   const std::vector<double>& color_masses, double gamma) {
    SizeBudgetReport r;
    const double n = cls.n;
    r.blank_total = cls.total(SegmentClass::Blank);
    r.blank_bound = (1.0 - beta) * n - 4.0 * gamma * n;
    r.blank_ok = r.blank_total >= r.blank_bound - 1e-9;
    r.colors_ok = true;
    for (size_t c = 0; c < cls.color_lengths.size(); ++c) {
        const double a = c < color_masses.size() ? color_masses[c] : 0.0;
        r.color_totals.push_back(cls.total(SegmentClass::Color, int(c)));
        r.color_bounds.push_back(beta * a * n + gamma * n);
        r.colors_ok = r.colors_ok && r.color_totals.back() <= r.color_bounds.back() + 1e-9;
    }
    r.filler_total = cls.total(SegmentClass::Filler);
    r.filler_bound = 6.0 * gamma * n;
    r.filler_ok = r.filler_total <= r.filler_bound + 1e-9;
    return r;
}

TypeCount count_types(const std::set<std::vector<int>>& observed, int n, double gamma) {
    if (!(10.0 * gamma < 0.5)) throw PreconditionError("count_types: need 10 gamma < 1/2");
    TypeCount t;
    t.observed = int(observed.size());
    t.log_bound = entropy_H(10.0 * gamma) * n;
    t.pass = t.observed == 0 || std::log(double(t.observed)) <= t.log_bound;
    return t;
}

double KappaTable::kappa(const ClassifiedSegment& s) const {
    switch (s.cls) {
        case SegmentClass::Blank: return lambda_hat / (r - 1) + eta;
        case SegmentClass::Color: return colors.at(s.color).h + lambda_hat / (r - 1) + 2.0 * eta;
        case SegmentClass::Filler: return filler_constant;
    }
    return filler_constant;
}

std::vector<int> type_schedule(const SegmentClassification& cls, int N) {
    if (N < 1) throw PreconditionError("type_schedule: N must be >= 1");
    std::vector<int> marks{0};
    for (const auto& s : cls.segments) {
        for (int m = s.interval.start + N; m < s.interval.end; m += N) marks.push_back(m);
        marks.push_back(s.interval.end);
    }
    return marks;
}

TypeFamily build_family_for_type(const SegmentClassification& theta, const RegularCurve& curve,
                                 const SurfaceMap& f, const KappaTable& kappa, double eps, double eps_hat,
                                 int N, const ParameterSet& covered, const SubdivisionOptions& opts) {
    TypeFamily out;
    const auto marks = type_schedule(theta, N);
    out.family = subdivide_along_schedule(curve, f, covered, marks, eps, eps_hat, N, opts);
    double budget = 0.0;
    for (const auto& s : theta.segments) {
        budget += kappa.kappa(s) * s.interval.length();
        out.log_budget_after_segment.push_back(budget);
        const auto it = std::find(marks.begin(), marks.end(), s.interval.end);
        out.counts_after_segment.push_back(out.family.counts_per_mark[it - marks.begin()]);
    }
    out.log_budget = budget;
    return out;
}

}  // namespace srb
