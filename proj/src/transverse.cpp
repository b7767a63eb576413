#include "srb/curve.hpp"
#include "srb/error.hpp"
#include "srb/kernels.hpp"

namespace srb {

TransverseSelection select_transverse_curve(const SurfaceMap& f, int samples, int horizon, double length) {
    if (samples < 1 || horizon < 1) throw PreconditionError("select_transverse_curve: need samples, horizon >= 1");
    std::vector<double> params(samples);
    for (int i = 0; i < samples; ++i) params[i] = (i + 0.5) / samples;

    std::optional<TransverseSelection> best;
    std::vector<double> fractions;
    for (int o = 0; o < 8; ++o) {
        const SurfacePoint p{(o + 0.5) / 8.0, ((3 * o) % 8 + 0.5) / 8.0};
        for (int d = 0; d < 8; ++d) {
            const double theta = d * kPi / 8.0;
            RegularCurve c = RegularCurve::segment(p, theta, length);
            const auto exps = kernels::curve_exponents(f, c, params, horizon);
            int pos = 0;
            for (double e : exps) pos += e > 0.0 ? 1 : 0;
            const double frac = double(pos) / samples;
            fractions.push_back(frac);
            if (!best || frac > best->fraction) best = TransverseSelection{c, frac, theta, p, {}};
        }
    }
    best->fractions = std::move(fractions);
    return *best;
}

}  // namespace srb
