#pragma once

#include <array>

#include "srb/torus.hpp"

namespace srb {

/// Highest derivative order carried by jets and Taylor series.
inline constexpr int kMaxOrder = 12;

/// Truncated Taylor series c[0] + c[1] h + ... + c[r] h^r; the order r is passed by the caller.
struct Taylor {
    std::array<double, kMaxOrder + 1> c{};
};

/// out = a * b truncated at degree r. `out` may not alias the inputs.
void taylor_mul(const Taylor& a, const Taylor& b, int r, Taylor& out);
/// out = a / b truncated at degree r; b.c[0] must be nonzero.
void taylor_div(const Taylor& a, const Taylor& b, int r, Taylor& out);

/// All partial derivatives of the two coordinate maps of f at a point, up to a given order.
///
/// d[k][i][a] holds d^k f_i / du^a dv^(k-a). The order-1 block is the Jacobian.
struct Jet {
    int order = 1;
    double fu = 0.0;  // f_1 at the point, unwrapped
    double fv = 0.0;  // f_2 at the point, unwrapped
    std::array<std::array<std::array<double, kMaxOrder + 1>, 2>, kMaxOrder + 1> d{};

    Mat2 jacobian() const { return {d[1][0][1], d[1][0][0], d[1][1][1], d[1][1][0]}; }

    /// Highest power of du (resp. dv) with a nonzero pure coefficient, and whether mixed
    /// partials of order >= 2 occur. Filled by `finalize`.
    int max_u_power = 1;
    int max_v_power = 1;
    bool mixed = false;
    void finalize();
};

/// Push the series (x(h), y(h)) through f using the jet taken at (x.c[0], y.c[0]).
/// This is Faa di Bruno's formula written on truncated power series.
void compose(const Jet& jet, const Taylor& x, const Taylor& y, int r, Taylor& ox, Taylor& oy);

}  // namespace srb
