#pragma once
#include <array>
#include <cmath>
#include <cstddef>

#include "llf/dd.hpp"
#include "llf/errors.hpp"

namespace llf {

// Small fixed-size state vector over a templated scalar (double or dd).
template <class S, std::size_t N>
using state = std::array<S, N>;

namespace detail {
template <class S, std::size_t N>
state<S, N> axpy(const state<S, N>& y, S a, const state<S, N>& d) {
    state<S, N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = y[i] + a * d[i];
    return r;
}
} // namespace detail

// One classical RK4 step.
template <class S, std::size_t N, class F>
state<S, N> rk4_step(const F& f, S x, const state<S, N>& y, S h) {
    using detail::axpy;
    const S half = S(0.5) * h;
    state<S, N> k1 = f(x, y);
    state<S, N> k2 = f(x + half, axpy(y, half, k1));
    state<S, N> k3 = f(x + half, axpy(y, half, k2));
    state<S, N> k4 = f(x + h, axpy(y, h, k3));
    state<S, N> out;
    const S sixth = h * S(1.0 / 6.0);
    for (std::size_t i = 0; i < N; ++i)
        out[i] = y[i] + sixth * (k1[i] + S(2.0) * (k2[i] + k3[i]) + k4[i]);
    return out;
}

// Dormand-Prince 5(4) adaptive integrator. Calls `observe(x, y)` after every
// accepted step. Stops at x_end (hits it exactly) or when observe returns false.
template <class S, std::size_t N, class F, class Obs>
void dopri5(const F& f, S x0, S x_end, state<S, N> y, double rtol, double atol,
            Obs&& observe, double h_init = 0.0, double h_max = 0.0) {
    static const double A21 = 1.0 / 5;
    static const double A31 = 3.0 / 40, A32 = 9.0 / 40;
    static const double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
    static const double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187,
                        A53 = 64448.0 / 6561, A54 = -212.0 / 729;
    static const double A61 = 9017.0 / 3168, A62 = -355.0 / 33,
                        A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                        A65 = -5103.0 / 18656;
    static const double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                        B5 = -2187.0 / 6784, B6 = 11.0 / 84;
    static const double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                        E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

    const double dir = to_double(x_end - x0) >= 0 ? 1.0 : -1.0;
    double span = std::fabs(to_double(x_end - x0));
    if (span == 0.0) { observe(x0, y); return; }
    double h = h_init > 0 ? h_init : span / 100.0;
    if (h_max > 0) h = std::min(h, h_max);
    S x = x0;
    std::size_t steps = 0;
    const std::size_t max_steps = 80'000'000;

    while (dir * to_double(x_end - x) > 0) {
        double remain = std::fabs(to_double(x_end - x));
        if (h > remain) h = remain;
        const S hs = scalar_traits<S>::from(dir * h);

        state<S, N> k1 = f(x, y);
        auto stage = [&](std::initializer_list<std::pair<double, const state<S, N>*>> terms) {
            state<S, N> yy = y;
            for (auto& [c, k] : terms)
                for (std::size_t i = 0; i < N; ++i) yy[i] = yy[i] + hs * scalar_traits<S>::from(c) * (*k)[i];
            return yy;
        };
        state<S, N> k2 = f(x + hs * S(1.0 / 5), stage({{A21, &k1}}));
        state<S, N> k3 = f(x + hs * S(3.0 / 10), stage({{A31, &k1}, {A32, &k2}}));
        state<S, N> k4 = f(x + hs * S(4.0 / 5), stage({{A41, &k1}, {A42, &k2}, {A43, &k3}}));
        state<S, N> k5 = f(x + hs * S(8.0 / 9), stage({{A51, &k1}, {A52, &k2}, {A53, &k3}, {A54, &k4}}));
        state<S, N> k6 = f(x + hs, stage({{A61, &k1}, {A62, &k2}, {A63, &k3}, {A64, &k4}, {A65, &k5}}));

        state<S, N> y5;
        for (std::size_t i = 0; i < N; ++i)
            y5[i] = y[i] + hs * (S(B1) * k1[i] + S(B3) * k3[i] + S(B4) * k4[i] +
                                 S(B5) * k5[i] + S(B6) * k6[i]);
        state<S, N> k7 = f(x + hs, y5);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            double e = to_double(hs * (S(E1) * k1[i] + S(E3) * k3[i] + S(E4) * k4[i] +
                                       S(E5) * k5[i] + S(E6) * k6[i] + S(E7) * k7[i]));
            double sc = atol + rtol * std::max(std::fabs(to_double(y[i])), std::fabs(to_double(y5[i])));
            err = std::max(err, std::fabs(e) / sc);
        }

        if (err <= 1.0) {
            x = x + hs;
            y = y5;
            if (!observe(x, y)) return;
        }
        double fac = 0.9 * std::pow(err > 1e-300 ? err : 1e-300, -0.2);
        fac = std::min(5.0, std::max(0.2, fac));
        h *= fac;
        if (h_max > 0) h = std::min(h, h_max);
        require(++steps < max_steps, "ode-step-limit", "dopri5 exceeded step budget");
    }
}

} // namespace llf
