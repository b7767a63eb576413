#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "srb/curve.hpp"
#include "srb/surface_map.hpp"
#include "srb/torus.hpp"

namespace srb {

/// Values of phi along an f-hat orbit segment.
struct PhiSequence {
    std::vector<double> values;
    std::optional<ProjectivePoint> origin;

    int size() const { return int(values.size()); }
};

/// Half-open index interval [start, end).
struct SegmentInterval {
    int start = 0;
    int end = 0;
    int length() const { return end - start; }
    bool operator==(const SegmentInterval&) const = default;
};

struct NeutralDecomposition {
    double alpha = 0.0;
    int capL = 1;
    std::vector<SegmentInterval> maximal_segments;
    /// One flag per orbit index: inside some listed segment.
    std::vector<std::uint8_t> in_neutral;
    int neutral_count = 0;

    double mass() const { return in_neutral.empty() ? 0.0 : double(neutral_count) / in_neutral.size(); }
};

/// Parameters s_i = (i + 1/2) / grid of [0,1] with membership flags.
struct ParameterSet {
    std::vector<double> samples;
    std::vector<std::uint8_t> member;
    double spacing = 0.0;

    static ParameterSet midpoint_grid(int grid);
    int count() const;
    double measure() const { return count() * spacing; }
    std::vector<double> member_values() const;
    /// Same grid, membership restricted to the listed sample indices.
    ParameterSet restricted(const std::vector<int>& indices) const;
    std::vector<int> member_indices() const;
};

/// Prefix sums, out[0] = 0 and length n+1.
std::vector<double> birkhoff_sums(const PhiSequence& seq);

/// S_i phi from the segment start is <= alpha * i for 0 < i <= length (ties count as neutral).
bool is_alpha_neutral(const PhiSequence& seq, const SegmentInterval& seg, double alpha);

/// Maximal alpha-neutral segments of length >= capL; O(n) monotone-stack scan.
NeutralDecomposition maximal_neutral_segments(const PhiSequence& seq, double alpha, int capL);

double neutral_mass(const PhiSequence& seq, double alpha, int capL);

/// Indices n in [0, len] with S_n - S_{n-k} >= lambda_min * k for all 0 <= k <= n.
std::vector<int> pliss_times(const PhiSequence& seq, double lambda_min);

/// Every suffix sum of the sequence is >= 0.
bool suffix_positive(const PhiSequence& seq);

/// phi sequence of length n along the lift of sigma at parameter s.
PhiSequence curve_phi_sequence(const SurfaceMap& f, const RegularCurve& curve, double s, int n);

/// Membership flags of T_n on the midpoint grid (expansion window, no close return, suffix
/// positivity). Throws PreconditionError if |sigma'| < 1e-12 at a sample.
ParameterSet sample_Tn(const SurfaceMap& f, const RegularCurve& curve, int n, double lambda_min,
                       double lambda_max, int grid);

struct GoodTime {
    bool found = false;
    int n = 0;
    ParameterSet T;
    /// (n, |T_n|) for every tested n.
    std::vector<std::pair<int, double>> trace;
};

/// Smallest n in [n_lo, n_hi] with |T_n| > rho^n.
GoodTime find_good_time(const SurfaceMap& f, const RegularCurve& curve, double rho, double lambda_min,
                        double lambda_max, int n_lo, int n_hi, int grid);

}  // namespace srb
