// Finite-difference and spectral derivatives on the sample grids, plus the
// signed cumulative trapezoid used by the nonlocal terms. The FD variants
// extend fields by their edge values, which matches the step-like asymptotics
// of the jump-data solutions; the spectral variants assume a clean periodic
// wrap and are used when the field actually has one.
#pragma once

#include <cmath>
#include <vector>

#include "core.hpp"
#include "fft.hpp"

namespace llgflow::detail {

template <class V>
inline const V& clamped(const std::vector<V>& v, long i) {
    if (i < 0) return v.front();
    if (i >= static_cast<long>(v.size())) return v.back();
    return v[static_cast<std::size_t>(i)];
}

// 6th-order centered first derivative, edge-clamped extension
template <class V>
inline std::vector<V> fd_gradient(const std::vector<V>& u, double h) {
    static const double c1 = 3.0 / 4.0, c2 = -3.0 / 20.0, c3 = 1.0 / 60.0;
    std::vector<V> g(u.size());
    const double inv_h = 1.0 / h;
    for (long i = 0; i < static_cast<long>(u.size()); ++i) {
        V acc = c1 * (clamped(u, i + 1) - clamped(u, i - 1)) +
                c2 * (clamped(u, i + 2) - clamped(u, i - 2)) +
                c3 * (clamped(u, i + 3) - clamped(u, i - 3));
        g[static_cast<std::size_t>(i)] = inv_h * acc;
    }
    return g;
}

// 8th-order centered first derivative (interior use; edges clamped)
template <class V>
inline std::vector<V> fd_gradient8(const std::vector<V>& u, double h) {
    static const double c1 = 4.0 / 5.0, c2 = -1.0 / 5.0, c3 = 4.0 / 105.0, c4 = -1.0 / 280.0;
    std::vector<V> g(u.size());
    const double inv_h = 1.0 / h;
    for (long i = 0; i < static_cast<long>(u.size()); ++i) {
        V acc = c1 * (clamped(u, i + 1) - clamped(u, i - 1)) +
                c2 * (clamped(u, i + 2) - clamped(u, i - 2)) +
                c3 * (clamped(u, i + 3) - clamped(u, i - 3)) +
                c4 * (clamped(u, i + 4) - clamped(u, i - 4));
        g[static_cast<std::size_t>(i)] = inv_h * acc;
    }
    return g;
}

// 8th-order centered second derivative
template <class V>
inline std::vector<V> fd_laplacian8(const std::vector<V>& u, double h) {
    static const double c0 = -205.0 / 72.0, c1 = 8.0 / 5.0, c2 = -1.0 / 5.0,
                        c3 = 8.0 / 315.0, c4 = -1.0 / 560.0;
    std::vector<V> g(u.size());
    const double inv_h2 = 1.0 / (h * h);
    for (long i = 0; i < static_cast<long>(u.size()); ++i) {
        V acc = c0 * clamped(u, i) + c1 * (clamped(u, i + 1) + clamped(u, i - 1)) +
                c2 * (clamped(u, i + 2) + clamped(u, i - 2)) +
                c3 * (clamped(u, i + 3) + clamped(u, i - 3)) +
                c4 * (clamped(u, i + 4) + clamped(u, i - 4));
        g[static_cast<std::size_t>(i)] = inv_h2 * acc;
    }
    return g;
}

inline std::vector<complexd> spectral_derivative(const std::vector<complexd>& u, double period,
                                                 int order) {
    std::vector<complexd> a = u;
    fft_inplace(a, false);
    const std::size_t n = a.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double xi = 2.0 * pi * signed_mode(k, n) / period;
        complexd mult = (order == 1) ? complexd(0.0, xi) : complexd(-xi * xi, 0.0);
        if (order == 1 && k == n / 2) mult = 0.0;  // drop the unmatched Nyquist mode
        a[k] *= mult;
    }
    fft_inplace(a, true);
    return a;
}

// relative wrap mismatch |u(last) - u(first)| / sup|u|; crude periodicity probe
template <class V>
inline double wrap_defect(const std::vector<V>& u) {
    double sup = 0.0;
    for (const auto& v : u) sup = std::max(sup, abs_of(v));
    if (sup == 0.0) return 0.0;
    return abs_of(u.back() - u.front()) / sup;
}

// Signed cumulative trapezoid anchored at x = 0: out[i] = int_0^{x_i} f.
// The anchor value at 0 is linearly interpolated between the bracketing nodes.
template <class V>
inline std::vector<V> cumulative_from_zero(const Grid1D& grid, const std::vector<V>& f) {
    const std::size_t n = f.size();
    std::vector<V> cum(n);
    cum[0] = 0.0 * f[0];
    for (std::size_t i = 1; i < n; ++i)
        cum[i] = cum[i - 1] + (0.5 * grid.spacing) * (f[i - 1] + f[i]);
    // value of the cumulative at x = 0
    V at0 = cum[0];
    if (grid.x(0) >= 0.0) {
        at0 = cum[0];
    } else if (grid.x(n - 1) <= 0.0) {
        at0 = cum[n - 1];
    } else {
        std::size_t i = 0;
        while (i + 1 < n && grid.x(i + 1) <= 0.0) ++i;
        const double frac = (0.0 - grid.x(i)) / grid.spacing;
        at0 = cum[i] + frac * (cum[i + 1] - cum[i]);
    }
    for (auto& v : cum) v = v - at0;
    return cum;
}

// 3-point first derivative on a nonuniform stencil (t0 < t1 < t2), value at t1
template <class V>
inline V nonuniform_dt(const V& u0, const V& u1, const V& u2, double t0, double t1, double t2) {
    const double h1 = t1 - t0, h2 = t2 - t1;
    const double w0 = -h2 / (h1 * (h1 + h2));
    const double w1 = (h2 - h1) / (h1 * h2);
    const double w2 = h1 / (h2 * (h1 + h2));
    return w0 * u0 + w1 * u1 + w2 * u2;
}

}  // namespace llgflow::detail
