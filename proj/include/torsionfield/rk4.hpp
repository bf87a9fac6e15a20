#pragma once

#include <array>
#include <cstddef>
#include <functional>

namespace torsionfield {

// Classical fixed-step 4th-order Runge-Kutta. Fixed step keeps runs
// reproducible and makes convergence-order tests clean.

template <std::size_t N>
using RkState = std::array<double, N>;

template <std::size_t N, class F>
RkState<N> rk4_step(F&& deriv, double t, const RkState<N>& y, double h) {
    RkState<N> k1 = deriv(t, y);
    RkState<N> tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    RkState<N> k2 = deriv(t + 0.5 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    RkState<N> k3 = deriv(t + 0.5 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * k3[i];
    RkState<N> k4 = deriv(t + h, tmp);
    RkState<N> out;
    for (std::size_t i = 0; i < N; ++i)
        out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

// Integrate from t0 to t1 with a fixed step; the final step is shortened to
// land exactly on t1. observe(t, y) is called after every accepted step and
// may return false to stop early (chart exit, degeneracy).
template <std::size_t N, class F, class Observer>
void rk4_integrate(F&& deriv, RkState<N>& y, double t0, double t1, double h, Observer&& observe) {
    double t = t0;
    const double dir = (t1 >= t0) ? 1.0 : -1.0;
    const double hs = dir * std::abs(h);
    if (!observe(t, y)) return;
    while (dir * (t1 - t) > 1e-14 * std::max(1.0, std::abs(t1))) {
        double step = hs;
        if (dir * (t + step - t1) > 0.0) step = t1 - t;
        y = rk4_step<N>(deriv, t, y, step);
        t += step;
        if (!observe(t, y)) return;
    }
}

}  // namespace torsionfield
