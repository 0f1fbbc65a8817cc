// Embedded Dormand-Prince 5(4) with PI step control. Steps are clamped so the
// integration lands exactly on each requested output node; direction follows
// the node ordering, so backward sweeps just pass decreasing nodes.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "core.hpp"

namespace llgflow::ode {

template <std::size_t N>
using state = std::array<double, N>;

namespace detail_ode {

template <std::size_t N>
inline state<N> axpy(const state<N>& y, double a, const state<N>& d) {
    state<N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + a * d[i];
    return out;
}

}  // namespace detail_ode

// rhs(s, y) -> dy/ds; on_node(s, y) fires at every node, including the first.
template <std::size_t N, class Rhs, class Node>
inline void dopri5_to_nodes(Rhs&& rhs, state<N> y, const std::vector<double>& nodes, double tol,
                            Node&& on_node, std::size_t max_steps = 50'000'000) {
    if (nodes.empty()) return;
    using detail_ode::axpy;

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    double s = nodes.front();
    on_node(s, y);

    std::size_t steps = 0;
    double prev_err = 1.0;
    for (std::size_t ni = 1; ni < nodes.size(); ++ni) {
        const double target = nodes[ni];
        const double dir = (target > s) ? 1.0 : -1.0;
        double h = dir * std::min(std::abs(target - s), 0.1);

        while (dir * (target - s) > 1e-14 * std::max(1.0, std::abs(target))) {
            if (++steps > max_steps) throw integration_error("dopri5: step budget exhausted");
            if (dir * (s + h) > dir * target) h = target - s;

            const state<N> k1 = rhs(s, y);
            const state<N> y2 = axpy(y, h * a21, k1);
            const state<N> k2 = rhs(s + c2 * h, y2);
            state<N> tmp;
            for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
            const state<N> k3 = rhs(s + c3 * h, tmp);
            for (std::size_t i = 0; i < N; ++i)
                tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            const state<N> k4 = rhs(s + c4 * h, tmp);
            for (std::size_t i = 0; i < N; ++i)
                tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            const state<N> k5 = rhs(s + c5 * h, tmp);
            for (std::size_t i = 0; i < N; ++i)
                tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                     a65 * k5[i]);
            const state<N> k6 = rhs(s + h, tmp);
            state<N> y5;
            for (std::size_t i = 0; i < N; ++i)
                y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
            const state<N> k7 = rhs(s + h, y5);

            double err = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                       e6 * k6[i] + e7 * k7[i]);
                const double scale = tol + tol * std::max(std::abs(y[i]), std::abs(y5[i]));
                err = std::max(err, std::abs(ei) / scale);
            }

            if (err <= 1.0) {
                s += h;
                y = y5;
                prev_err = std::max(err, 1e-10);
            }
            // PI controller (orders 5/4)
            const double fac =
                0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) * std::pow(prev_err, 0.4 / 5.0);
            h *= std::min(5.0, std::max(0.2, fac));
            if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(s)))
                throw integration_error("dopri5: step size underflow");
        }
        on_node(target, y);
    }
}

}  // namespace llgflow::ode
