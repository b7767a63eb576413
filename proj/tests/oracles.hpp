#pragma once
// Brute-force references written directly from the definitions, O(n^2) or worse on purpose.
#include <cstdint>
#include <vector>

#include "srb/orbit_analysis.hpp"

namespace test_oracle {

// recorded from the first full run with the same inputs
inline constexpr int kPerturbedGoodTime = 10;

inline std::vector<double> prefix(const std::vector<double>& v) {
    std::vector<double> S(v.size() + 1, 0.0);
    for (size_t i = 0; i < v.size(); ++i) S[i + 1] = S[i] + v[i];
    return S;
}

// index flagged iff some alpha-neutral [s,e) with e-s >= L contains it
inline std::vector<std::uint8_t> neutral_flags(const std::vector<double>& v, double alpha, int L) {
    const int n = int(v.size());
    std::vector<std::uint8_t> flags(n, 0);
    for (int s = 0; s < n; ++s)
        for (int e = s + L; e <= n; ++e) {
            double sum = 0.0;
            bool ok = true;
            for (int i = 1; i <= e - s && ok; ++i) {
                sum += v[s + i - 1];
                ok = sum <= alpha * i;
            }
            if (ok)
                for (int i = s; i < e; ++i) flags[i] = 1;
        }
    return flags;
}

inline std::vector<srb::SegmentInterval> runs(const std::vector<std::uint8_t>& flags) {
    std::vector<srb::SegmentInterval> out;
    const int n = int(flags.size());
    for (int i = 0; i < n;) {
        if (!flags[i]) {
            ++i;
            continue;
        }
        int j = i;
        while (j < n && flags[j]) ++j;
        out.push_back({i, j});
        i = j;
    }
    return out;
}

// n in [0, len] with S_n - S_{n-k} >= lambda k for every 0 <= k <= n
inline std::vector<int> pliss_times(const std::vector<double>& v, double lambda) {
    const int n = int(v.size());
    std::vector<int> out;
    for (int m = 0; m <= n; ++m) {
        bool ok = true;
        for (int k = 0; k <= m && ok; ++k) {
            double sum = 0.0;
            for (int i = m - k; i < m; ++i) sum += v[i];
            ok = sum >= lambda * k;
        }
        if (ok) out.push_back(m);
    }
    return out;
}

}  // namespace test_oracle
