// Discrete estimators for the mean-oscillation (BMO) semi-norm, the
// space-time X and Y norms over parabolic balls Q_r(x) = B_r(x) x [0, r^2],
// and the closed-form Carleson integral of the self-similar gradient.
//
// Ball suprema run over a dyadic radius ladder and all grid centers, so every
// estimator is a lower bound of its continuum counterpart that sharpens under
// refinement. Time integrals use the trajectory's sample times only.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "core.hpp"
#include "special.hpp"

namespace llgflow::norms {

inline double e1(double y) { return special::e1(y); }

struct ParabolicBallSet {
    std::vector<double> centers;
    std::vector<double> radii;

    void validate() const {
        if (centers.empty() || radii.empty())
            throw std::invalid_argument("ParabolicBallSet: empty centers or radii");
        for (double r : radii)
            if (!(r > 0.0)) throw std::invalid_argument("ParabolicBallSet: radii must be positive");
    }

    // dyadic radii extent * 2^-k down to a few grid cells, all grid centers
    static ParabolicBallSet dyadic(const Grid1D& grid, std::size_t center_stride = 1) {
        ParabolicBallSet b;
        for (std::size_t i = 0; i < grid.n; i += center_stride) b.centers.push_back(grid.x(i));
        for (double r = grid.extent(); r >= 4.0 * grid.spacing; r *= 0.5) b.radii.push_back(r);
        if (b.radii.empty()) b.radii.push_back(grid.extent());
        return b;
    }
};

inline std::vector<double> dyadic_radii(const Grid1D& grid) {
    std::vector<double> radii;
    for (double r = grid.extent(); r >= 2.0 * grid.spacing; r *= 0.5) radii.push_back(r);
    if (radii.empty()) radii.push_back(grid.extent());
    return radii;
}

namespace detail_norms {

template <class V>
struct accum;

template <>
struct accum<complexd> {
    complexd sum{0.0, 0.0};
    void add(const complexd& v) { sum += v; }
    complexd mean(std::size_t cnt) const { return sum / static_cast<double>(cnt); }
};

template <>
struct accum<vec3> {
    vec3 sum{0.0, 0.0, 0.0};
    void add(const vec3& v) { sum = sum + v; }
    vec3 mean(std::size_t cnt) const { return (1.0 / static_cast<double>(cnt)) * sum; }
};

// index window of B_r(xc) clipped to the grid; whole ball must fit the domain
inline bool ball_window(const Grid1D& g, double xc, double r, std::size_t& lo, std::size_t& hi) {
    if (xc - r < g.x_min() - 0.5 * g.spacing || xc + r > g.x_max() + 0.5 * g.spacing) return false;
    const double flo = std::ceil((xc - r - g.origin) / g.spacing - 1e-12);
    const double fhi = std::floor((xc + r - g.origin) / g.spacing + 1e-12);
    if (fhi < flo) return false;
    lo = static_cast<std::size_t>(std::max(0.0, flo));
    hi = static_cast<std::size_t>(std::min(static_cast<double>(g.n - 1), fhi));
    return hi >= lo;
}

}  // namespace detail_norms

// sup over centers and window radii of the mean oscillation
// (1/|B_r|) int_{B_r} |f - f_avg|, midpoint quadrature on the sample grid
template <class V>
inline double bmo_seminorm(const Grid1D& grid, const std::vector<V>& f,
                           const std::vector<double>& radii) {
    if (radii.empty()) throw std::invalid_argument("bmo_seminorm: empty window list");
    bool any = false;
    double best = 0.0;
    for (double r : radii) {
        if (r > grid.extent() + 1e-12) continue;
        for (std::size_t c = 0; c < grid.n; ++c) {
            std::size_t lo, hi;
            if (!detail_norms::ball_window(grid, grid.x(c), r, lo, hi)) continue;
            any = true;
            detail_norms::accum<V> acc;
            for (std::size_t i = lo; i <= hi; ++i) acc.add(f[i]);
            const V avg = acc.mean(hi - lo + 1);
            double osc = 0.0;
            for (std::size_t i = lo; i <= hi; ++i) osc += abs_of(f[i] - avg);
            best = std::max(best, osc / static_cast<double>(hi - lo + 1));
        }
    }
    if (!any) throw std::invalid_argument("bmo_seminorm: no window fits the domain");
    return best;
}

inline double bmo_seminorm(const ComplexField& f, const std::vector<double>& radii) {
    return bmo_seminorm(f.grid, f.values, radii);
}
inline double bmo_seminorm(const Vec3Field& f, const std::vector<double>& radii) {
    return bmo_seminorm(f.grid, f.values, radii);
}

// sup of the double average (1/|B_r|^2) int int |f(y) - f(z)|; sandwiched
// between the semi-norm and twice the semi-norm
template <class V>
inline double bmo_double_average(const Grid1D& grid, const std::vector<V>& f,
                                 const std::vector<double>& radii) {
    if (radii.empty()) throw std::invalid_argument("bmo_double_average: empty window list");
    bool any = false;
    double best = 0.0;
    for (double r : radii) {
        if (r > grid.extent() + 1e-12) continue;
        for (std::size_t c = 0; c < grid.n; ++c) {
            std::size_t lo, hi;
            if (!detail_norms::ball_window(grid, grid.x(c), r, lo, hi)) continue;
            any = true;
            const std::size_t cnt = hi - lo + 1;
            double total = 0.0;
            for (std::size_t i = lo; i <= hi; ++i)
                for (std::size_t j = lo; j <= hi; ++j) total += abs_of(f[i] - f[j]);
            best = std::max(best, total / (static_cast<double>(cnt) * static_cast<double>(cnt)));
        }
    }
    if (!any) throw std::invalid_argument("bmo_double_average: no window fits the domain");
    return best;
}

inline double bmo_double_average(const ComplexField& f, const std::vector<double>& radii) {
    return bmo_double_average(f.grid, f.values, radii);
}
inline double bmo_double_average(const Vec3Field& f, const std::vector<double>& radii) {
    return bmo_double_average(f.grid, f.values, radii);
}

// ---------------------------------------------------------------------------
// X semi-norm: sup_t sqrt(t) ||grad v||_inf  +  sup_balls (r^-1 int_{Q_r} |grad v|^2)^{1/2}

struct XSeminorm {
    double sup_part = 0.0;       // sup_t sqrt(t) ||grad v||_inf
    double carleson_part = 0.0;  // ball supremum, square-rooted
    double total() const { return sup_part + carleson_part; }
};

namespace detail_norms {

// per-time profile of int over B_r of |grad|^2 (or |v| for the Y norm) via
// prefix sums; entry t gives I_t(ball) in O(1)
inline double window_sum(const std::vector<double>& prefix, std::size_t lo, std::size_t hi) {
    return prefix[hi + 1] - prefix[lo];
}

// trapezoid over sampled times clipped to [0, t_cap]; integrand known at the
// sample times only, linear between, zero credit below the first sample
inline double time_integral(const std::vector<double>& times, const std::vector<double>& vals,
                            double t_cap) {
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
        const double t0 = times[k], t1 = times[k + 1];
        if (t0 >= t_cap) break;
        if (t1 <= t_cap) {
            acc += 0.5 * (vals[k] + vals[k + 1]) * (t1 - t0);
        } else {
            const double frac = (t_cap - t0) / (t1 - t0);
            const double v_cap = vals[k] + frac * (vals[k + 1] - vals[k]);
            acc += 0.5 * (vals[k] + v_cap) * (t_cap - t0);
            break;
        }
    }
    return acc;
}

}  // namespace detail_norms

template <class V>
inline XSeminorm x_seminorm(const Trajectory<V>& tr, const ParabolicBallSet& balls) {
    tr.validate();
    balls.validate();
    if (!tr.has_gradients()) throw std::invalid_argument("x_seminorm: gradient data missing");

    XSeminorm out;
    const std::size_t nt = tr.times.size();
    const std::size_t nx = tr.grid.n;

    // prefix sums of h * |grad|^2 per time slice
    std::vector<std::vector<double>> prefix(nt, std::vector<double>(nx + 1, 0.0));
    for (std::size_t k = 0; k < nt; ++k) {
        double sup_g = 0.0;
        for (std::size_t i = 0; i < nx; ++i) {
            const double g = abs_of(tr.gradients[k][i]);
            sup_g = std::max(sup_g, g);
            prefix[k][i + 1] = prefix[k][i] + tr.grid.spacing * g * g;
        }
        out.sup_part = std::max(out.sup_part, std::sqrt(tr.times[k]) * sup_g);
    }

    double worst = 0.0;
    std::vector<double> slice(nt);
    for (double r : balls.radii) {
        for (double xc : balls.centers) {
            std::size_t lo, hi;
            if (!detail_norms::ball_window(tr.grid, xc, r, lo, hi)) continue;
            for (std::size_t k = 0; k < nt; ++k)
                slice[k] = detail_norms::window_sum(prefix[k], lo, hi);
            const double qr = detail_norms::time_integral(tr.times, slice, r * r);
            worst = std::max(worst, qr / r);
        }
    }
    out.carleson_part = std::sqrt(worst);
    return out;
}

// Y norm: sup_t t ||v||_inf + sup_balls r^-1 int_{Q_r} |v|
template <class V>
inline double y_norm(const Trajectory<V>& tr, const ParabolicBallSet& balls) {
    tr.validate();
    balls.validate();

    double sup_part = 0.0;
    const std::size_t nt = tr.times.size();
    const std::size_t nx = tr.grid.n;
    std::vector<std::vector<double>> prefix(nt, std::vector<double>(nx + 1, 0.0));
    for (std::size_t k = 0; k < nt; ++k) {
        double sup_v = 0.0;
        for (std::size_t i = 0; i < nx; ++i) {
            const double a = abs_of(tr.values[k][i]);
            sup_v = std::max(sup_v, a);
            prefix[k][i + 1] = prefix[k][i] + tr.grid.spacing * a;
        }
        sup_part = std::max(sup_part, tr.times[k] * sup_v);
    }

    double worst = 0.0;
    std::vector<double> slice(nt);
    for (double r : balls.radii) {
        for (double xc : balls.centers) {
            std::size_t lo, hi;
            if (!detail_norms::ball_window(tr.grid, xc, r, lo, hi)) continue;
            for (std::size_t k = 0; k < nt; ++k)
                slice[k] = detail_norms::window_sum(prefix[k], lo, hi);
            worst = std::max(worst, detail_norms::time_integral(tr.times, slice, r * r) / r);
        }
    }
    return sup_part + worst;
}

// ---------------------------------------------------------------------------
// Carleson integral of the self-similar gradient over Q_r(x):
//   I_{r,x} = (sqrt(2) c^2 / sqrt(alpha)) int_{z1}^{z2} E1(z^2) dz,
//   z_{1,2} = sqrt(alpha/2) (x/r -+ 1),
// with the antiderivative int_0^b E1(z^2) dz = b E1(b^2) + sqrt(pi) erf(b).

namespace detail_norms {

inline double e1_sq_antiderivative(double b) {
    if (b == 0.0) return 0.0;
    const double a = std::abs(b);
    const double val = a * special::e1(a * a) + sqrt_pi * std::erf(a);
    return b > 0.0 ? val : -val;
}

}  // namespace detail_norms

inline double carleson_selfsim(double c, double alpha, double x, double r) {
    if (!(r > 0.0)) throw std::domain_error("carleson_selfsim: r must be positive");
    if (!(alpha > 0.0) || alpha > 1.0) throw std::domain_error("carleson_selfsim: alpha in (0,1]");
    if (c == 0.0) return 0.0;
    const double s = std::sqrt(0.5 * alpha);
    const double z1 = s * (x / r - 1.0);
    const double z2 = s * (x / r + 1.0);
    const double integral =
        detail_norms::e1_sq_antiderivative(z2) - detail_norms::e1_sq_antiderivative(z1);
    return std::sqrt(2.0) * c * c / std::sqrt(alpha) * integral;
}

// the uniform bound 2 sqrt(2 pi) c^2 / sqrt(alpha)
inline double carleson_selfsim_bound(double c, double alpha) {
    return 2.0 * std::sqrt(2.0 * pi) * c * c / std::sqrt(alpha);
}

}  // namespace llgflow::norms
