// Test-only oracles, kept independent of the library paths they check:
// adaptive Simpson quadrature, brute-force oscillation maximization over all
// discrete intervals, direct space-time quadrature of the self-similar
// gradient, a naive DFT, and random analytic field fixtures with exact
// derivatives.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "llgflow/core.hpp"

namespace oracles {

using llgflow::complexd;
using llgflow::vec3;

// ---------------------------------------------------------------------------
// adaptive Simpson, recursive with Richardson correction

template <class F, class R>
R simpson_rec(F&& f, double a, double b, double tol, int depth, R fa, R fm, R fb, R whole) {
    const double m = 0.5 * (a + b);
    const R flm = f(0.5 * (a + m));
    const R frm = f(0.5 * (m + b));
    const R left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const R right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const R delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, m, 0.5 * tol, depth - 1, fa, flm, fm, left) +
           simpson_rec(f, m, b, 0.5 * tol, depth - 1, fm, frm, fb, right);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, tol, 52, fa, fm, fb, whole);
}

inline complexd integrate_c(const std::function<complexd(double)>& f, double a, double b,
                            double tol = 1e-13) {
    if (a == b) return complexd(0.0);
    const complexd fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const complexd whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, tol, 52, fa, fm, fb, whole);
}

// integral over [0, b] of a function with an integrable endpoint singularity
// at 0, via dyadically graded panels
inline double integrate_graded_at_zero(const std::function<double(double)>& f, double b,
                                       int panels = 48, double tol = 1e-13) {
    double total = 0.0;
    double hi = b;
    for (int k = 0; k < panels; ++k) {
        const double lo = 0.5 * hi;
        total += integrate(f, lo, hi, tol / panels);
        hi = lo;
    }
    return total;
}

// ---------------------------------------------------------------------------
// brute-force mean-oscillation maximization over every contiguous window

template <class V>
double bmo_bruteforce(const std::vector<V>& f) {
    const std::size_t n = f.size();
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        V sum = 0.0 * f[0];
        for (std::size_t j = i; j < n; ++j) {
            sum = sum + f[j];
            const std::size_t cnt = j - i + 1;
            const V avg = (1.0 / static_cast<double>(cnt)) * sum;
            double osc = 0.0;
            for (std::size_t k = i; k <= j; ++k) osc += llgflow::abs_of(f[k] - avg);
            best = std::max(best, osc / static_cast<double>(cnt));
        }
    }
    return best;
}

template <class V>
double double_average_bruteforce(const std::vector<V>& f) {
    const std::size_t n = f.size();
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const std::size_t cnt = j - i + 1;
            double tot = 0.0;
            for (std::size_t a = i; a <= j; ++a)
                for (std::size_t b = i; b <= j; ++b) tot += llgflow::abs_of(f[a] - f[b]);
            best = std::max(best, tot / (static_cast<double>(cnt) * static_cast<double>(cnt)));
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// direct space-time quadrature of (1/r) int_{x-r}^{x+r} int_0^{r^2}
// c^2 e^{-alpha y^2 / (2t)} / t dt dy (the self-similar gradient squared)

inline double carleson_bruteforce(double c, double alpha, double x, double r) {
    // inner t-integral via substitution t = r^2 e^{-s}: int_0^{r^2} e^{-a/t}/t dt
    auto inner = [&](double y) {
        const double a = 0.5 * alpha * y * y;
        auto g = [&](double s) { return std::exp(-a * std::exp(s) / (r * r)); };
        double hi = std::log(std::max(60.0 * r * r / std::max(a, 1e-280), 2.0));
        return integrate(g, 0.0, hi, 1e-14);
    };
    // outer y-integral; the integrand has a log singularity at y = 0
    auto outer_smooth = [&](double lo, double hi) {
        if (hi <= lo) return 0.0;
        return integrate([&](double y) { return inner(y); }, lo, hi, 1e-12);
    };
    const double lo = x - r, hi = x + r;
    double total = 0.0;
    if (lo < 0.0 && hi > 0.0) {
        // graded panels into the singularity from both sides
        double a = -lo, b = hi;
        for (double edge : {a, b}) {
            double top = edge;
            for (int k = 0; k < 44; ++k) {
                const double bot = 0.5 * top;
                total += outer_smooth(bot, top);
                top = bot;
            }
            total += top * (inner(0.5 * top));  // midpoint on the last sliver
        }
    } else {
        total = outer_smooth(std::min(std::abs(lo), std::abs(hi)), std::max(std::abs(lo), std::abs(hi)));
    }
    return c * c * total / r;
}

// ---------------------------------------------------------------------------
// naive DFT matching the fft convention

inline std::vector<complexd> dft_naive(const std::vector<complexd>& a, bool inverse) {
    const std::size_t n = a.size();
    std::vector<complexd> out(n, complexd(0.0));
    const double sgn = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = sgn * 2.0 * llgflow::pi * static_cast<double>(j * k % n) /
                               static_cast<double>(n);
            out[k] += a[j] * complexd(std::cos(ang), std::sin(ang));
        }
    if (inverse)
        for (auto& z : out) z /= static_cast<double>(n);
    return out;
}

// ---------------------------------------------------------------------------
// random analytic fixtures: finite trig sums with exact derivatives

struct TrigField {
    std::vector<double> amp_re, amp_im, freq, phase;
    double scale = 1.0;

    complexd value(double x) const {
        complexd v(0.0);
        for (std::size_t k = 0; k < freq.size(); ++k)
            v += complexd(amp_re[k], amp_im[k]) * std::sin(freq[k] * x + phase[k]);
        return scale * v;
    }
    complexd deriv(double x) const {
        complexd v(0.0);
        for (std::size_t k = 0; k < freq.size(); ++k)
            v += complexd(amp_re[k], amp_im[k]) * freq[k] * std::cos(freq[k] * x + phase[k]);
        return scale * v;
    }

    double sup_on(const std::vector<double>& xs) const {
        double s = 0.0;
        for (double x : xs) s = std::max(s, std::abs(value(x)));
        return s;
    }
};

inline TrigField random_trig_field(std::mt19937_64& rng, int modes = 4, double max_freq = 2.0) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    TrigField f;
    for (int k = 0; k < modes; ++k) {
        f.amp_re.push_back(uni(rng));
        f.amp_im.push_back(uni(rng));
        f.freq.push_back(max_freq * std::abs(uni(rng)) + 0.1);
        f.phase.push_back(llgflow::pi * uni(rng));
    }
    return f;
}

}  // namespace oracles
