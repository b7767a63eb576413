#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "srb/orbit_analysis.hpp"
#include "srb/reparam.hpp"

namespace srb {

enum class SegmentClass { Blank, Color, Filler };
const char* to_string(SegmentClass c);

struct ClassifiedSegment {
    SegmentInterval interval;
    SegmentClass cls = SegmentClass::Filler;
    int color = -1;  // index into the color list for Color segments
};

struct SegmentClassification {
    int n = 0;
    std::vector<ClassifiedSegment> segments;
    /// Start times of the segments, in order.
    std::vector<int> type_theta;
    double alpha = 0.0;
    int capL = 1;
    double gamma = 0.0;
    std::vector<int> color_lengths;

    int total(SegmentClass c, int color = -1) const;
};

/// Blank / color / filler split of an orbit segment of length n. `in_u0` and each entry of
/// `in_color` hold one membership flag per orbit index.
SegmentClassification classify_segments(const PhiSequence& seq, const std::vector<std::uint8_t>& in_u0,
                                        const std::vector<std::vector<std::uint8_t>>& in_color, double alpha,
                                        int capL, double gamma, const std::vector<int>& color_lengths);

struct SizeBudgetReport {
    double blank_total = 0.0;
    double blank_bound = 0.0;  // (1 - beta) n - 4 gamma n, lower bound
    bool blank_ok = false;
    std::vector<double> color_totals;
    std::vector<double> color_bounds;  // beta a_c n + gamma n, upper bounds
    bool colors_ok = false;
    double filler_total = 0.0;
    double filler_bound = 0.0;  // 6 gamma n
    bool filler_ok = false;

    bool pass() const { return blank_ok && colors_ok && filler_ok; }
};

SizeBudgetReport size_budget_check(const SegmentClassification& cls, double beta,
                                   const std::vector<double>& color_masses, double gamma);

struct TypeCount {
    bool pass = false;
    int observed = 0;
    double log_bound = 0.0;  // H(10 gamma) n
};

/// Number of distinct types against exp(H(10 gamma) n); requires 10 gamma < 1/2.
TypeCount count_types(const std::set<std::vector<int>>& observed, int n, double gamma);

struct ColorData {
    int n1 = 0;
    double h = 0.0;
    double a = 0.0;
};

struct KappaTable {
    double lambda_hat = 0.0;
    int r = 2;
    double eta = 0.0;
    std::vector<ColorData> colors;
    double filler_constant = 0.0;

    double kappa(const ClassifiedSegment& s) const;
};

struct TypeFamily {
    AdmissibleFamily family;
    /// sum of kappa_i (t_i - t_{i-1}) in log form.
    double log_budget = 0.0;
    /// Piece count at the end of each segment.
    std::vector<int> counts_after_segment;
    std::vector<double> log_budget_after_segment;
};

/// Marks at every segment boundary plus every N steps inside long segments.
std::vector<int> type_schedule(const SegmentClassification& cls, int N);

/// Admissible family over the parameters of one type, built segment by segment.
TypeFamily build_family_for_type(const SegmentClassification& theta, const RegularCurve& curve,
                                 const SurfaceMap& f, const KappaTable& kappa, double eps, double eps_hat,
                                 int N, const ParameterSet& covered, const SubdivisionOptions& opts);

}  // namespace srb
