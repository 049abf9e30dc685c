#pragma once
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace llf {

// 6-point (quintic) Lagrange interpolation on a uniform grid y0 + i*dy.
// Clamps the stencil at the ends; values outside the grid extrapolate from
// the edge stencil, so callers must handle out-of-support themselves when
// the function is known to vanish there.
template <class T>
T interp_uniform(const std::vector<T>& v, double y0, double dy, double y) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(v.size());
    if (n == 1) return v[0];
    double u = (y - y0) / dy;
    std::ptrdiff_t i0 = static_cast<std::ptrdiff_t>(std::floor(u)) - 2;
    if (i0 < 0) i0 = 0;
    if (i0 > n - 6) i0 = n - 6;
    if (i0 < 0) i0 = 0; // tiny grids
    std::ptrdiff_t m = std::min<std::ptrdiff_t>(6, n - i0);
    double t = u - static_cast<double>(i0);
    T acc{};
    for (std::ptrdiff_t j = 0; j < m; ++j) {
        double w = 1.0;
        for (std::ptrdiff_t k = 0; k < m; ++k) {
            if (k == j) continue;
            w *= (t - static_cast<double>(k)) / static_cast<double>(j - k);
        }
        acc += v[static_cast<std::size_t>(i0 + j)] * w;
    }
    return acc;
}

} // namespace llf
