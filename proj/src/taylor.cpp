#include "srb/taylor.hpp"

#include <algorithm>

namespace srb {

void taylor_mul(const Taylor& a, const Taylor& b, int r, Taylor& out) {
    for (int k = 0; k <= r; ++k) {
        double s = 0.0;
        for (int j = 0; j <= k; ++j) s += a.c[j] * b.c[k - j];
        out.c[k] = s;
    }
}

void taylor_div(const Taylor& a, const Taylor& b, int r, Taylor& out) {
    const double inv = 1.0 / b.c[0];
    for (int k = 0; k <= r; ++k) {
        double s = a.c[k];
        for (int j = 1; j <= k; ++j) s -= b.c[j] * out.c[k - j];
        out.c[k] = s * inv;
    }
}

void Jet::finalize() {
    max_u_power = 1;
    max_v_power = 1;
    mixed = false;
    for (int k = 2; k <= order; ++k) {
        for (int i = 0; i < 2; ++i) {
            for (int a = 0; a <= k; ++a) {
                if (d[k][i][a] == 0.0) continue;
                if (a == k) max_u_power = std::max(max_u_power, k);
                else if (a == 0) max_v_power = std::max(max_v_power, k);
                else mixed = true;
            }
        }
    }
}

namespace {

constexpr std::array<double, kMaxOrder + 1> make_inv_factorials() {
    std::array<double, kMaxOrder + 1> f{};
    double v = 1.0;
    f[0] = 1.0;
    for (int k = 1; k <= kMaxOrder; ++k) {
        v *= k;
        f[k] = 1.0 / v;
    }
    return f;
}

constexpr auto kInvFact = make_inv_factorials();

// Powers dx^p for p = 0..pmax; dx has zero constant term so dx^p starts at degree p.
void powers(const Taylor& dx, int pmax, int r, std::array<Taylor, kMaxOrder + 1>& out) {
    out[0] = Taylor{};
    out[0].c[0] = 1.0;
    if (pmax >= 1) out[1] = dx;
    for (int p = 2; p <= pmax; ++p) {
        Taylor& o = out[p];
        o.c.fill(0.0);
        for (int k = p; k <= r; ++k) {
            double s = 0.0;
            for (int j = 1; j <= k - p + 1; ++j) s += dx.c[j] * out[p - 1].c[k - j];
            o.c[k] = s;
        }
    }
}

}  // namespace

void compose(const Jet& jet, const Taylor& x, const Taylor& y, int r, Taylor& ox, Taylor& oy) {
    Taylor dx = x;
    Taylor dy = y;
    dx.c[0] = 0.0;
    dy.c[0] = 0.0;

    const Mat2 J = jet.jacobian();
    ox.c.fill(0.0);
    oy.c.fill(0.0);
    ox.c[0] = jet.fu;
    oy.c[0] = jet.fv;
    for (int k = 1; k <= r; ++k) {
        ox.c[k] = J.a * dx.c[k] + J.b * dy.c[k];
        oy.c[k] = J.c * dx.c[k] + J.d * dy.c[k];
    }

    const int top = std::min(jet.order, r);
    if (top < 2) return;
    const int pu = jet.mixed ? top : std::min(jet.max_u_power, top);
    const int pv = jet.mixed ? top : std::min(jet.max_v_power, top);
    if (pu < 2 && pv < 2 && !jet.mixed) return;

    std::array<Taylor, kMaxOrder + 1> up;
    std::array<Taylor, kMaxOrder + 1> vp;
    powers(dx, pu, r, up);
    powers(dy, pv, r, vp);

    Taylor prod;
    for (int k = 2; k <= top; ++k) {
        for (int a = 0; a <= k; ++a) {
            const double cx = jet.d[k][0][a];
            const double cy = jet.d[k][1][a];
            if (cx == 0.0 && cy == 0.0) continue;
            const int b = k - a;
            const double w = kInvFact[a] * kInvFact[b];
            const Taylor* term = nullptr;
            if (b == 0) {
                term = &up[a];
            } else if (a == 0) {
                term = &vp[b];
            } else {
                taylor_mul(up[a], vp[b], r, prod);
                term = &prod;
            }
            for (int m = k; m <= r; ++m) {
                ox.c[m] += w * cx * term->c[m];
                oy.c[m] += w * cy * term->c[m];
            }
        }
    }
}

}  // namespace srb
