// Self-similar machinery: tangent profiles built by Serret-Frenet integration
// with curvature c e^{-alpha s^2/4} and torsion beta s / 2, their limit
// vectors and opening angle, pointwise evaluation of m(x,t) = f(x/sqrt(t)),
// the Dirichlet energy law, two-sided step data, and the inverse problems
// (angle -> amplitude, one root per monotone branch).
//
// The profile lives on a uniform s-grid; the adaptive integrator is forced
// through the nodes and the frame is re-orthonormalized whenever its drift
// exceeds the build tolerance. Truncation at s_max is certified by the tail
// bound c sqrt(pi/alpha) erfc(sqrt(alpha) s_max / 2).
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "core.hpp"
#include "ode.hpp"
#include "special.hpp"

namespace llgflow::selfsim {

struct Profile {
    double c = 0.0;
    double alpha = 1.0;
    double beta = 0.0;
    double tol = 0.0;
    double ds = 0.0;
    double s_max = 0.0;
    double tail_bound = 0.0;
    std::vector<double> s_grid;      // uniform, -s_max .. s_max
    std::vector<vec3> f;             // unit tangent (the profile)
    std::vector<vec3> nrm;           // normal
    std::vector<vec3> bin;           // binormal
    vec3 a_plus{1, 0, 0};            // f(s_max)
    vec3 a_minus{1, 0, 0};           // f(-s_max)

    double kappa(double s) const { return c * std::exp(-alpha * s * s / 4.0); }
    double torsion(double s) const { return beta * s / 2.0; }

    std::size_t center() const { return s_grid.size() / 2; }

    // nodal tangent derivative f'(s_i) = kappa n_i, used by the interpolant
    vec3 f_prime(std::size_t i) const { return kappa(s_grid[i]) * nrm[i]; }
};

struct AngleResult {
    double theta = 0.0;
    double c = 0.0;
    double alpha = 1.0;
};

namespace detail_selfsim {

inline double tail_integral(double c, double alpha, double s) {
    return c * std::sqrt(pi / alpha) * std::erfc(0.5 * std::sqrt(alpha) * s);
}

inline double frame_drift(const ode::state<9>& y) {
    const vec3 f{y[0], y[1], y[2]}, n{y[3], y[4], y[5]}, b{y[6], y[7], y[8]};
    double d = 0.0;
    d = std::max(d, std::abs(dot(f, f) - 1.0));
    d = std::max(d, std::abs(dot(n, n) - 1.0));
    d = std::max(d, std::abs(dot(b, b) - 1.0));
    d = std::max(d, std::abs(dot(f, n)));
    d = std::max(d, std::abs(dot(f, b)));
    d = std::max(d, std::abs(dot(n, b)));
    return d;
}

inline void reorthonormalize(ode::state<9>& y) {
    vec3 f{y[0], y[1], y[2]}, n{y[3], y[4], y[5]};
    f = normalized(f);
    n = n - dot(n, f) * f;
    n = normalized(n);
    const vec3 b = cross(f, n);
    y = {f[0], f[1], f[2], n[0], n[1], n[2], b[0], b[1], b[2]};
}

}  // namespace detail_selfsim

inline Profile build_profile(double c, double alpha, double tol, double ds = 1.0 / 256.0) {
    if (!(c > 0.0)) throw std::domain_error("build_profile: c must be positive");
    if (!(alpha > 0.0) || alpha > 1.0) throw std::domain_error("build_profile: alpha in (0,1]");
    if (!(tol > 1e-14) || !(tol < 1e-4)) throw std::domain_error("build_profile: tol in (1e-14, 1e-4)");

    Profile p;
    p.c = c;
    p.alpha = alpha;
    p.beta = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
    p.tol = tol;
    p.ds = ds;

    const double cap = 100.0 / std::sqrt(alpha);
    if (detail_selfsim::tail_integral(c, alpha, cap) >= tol)
        throw integration_error("build_profile: tail tolerance unreachable before s = 100/sqrt(alpha)");
    double lo = 0.0, hi = cap;
    for (int it = 0; it < 200 && hi - lo > 1e-9; ++it) {
        const double mid = 0.5 * (lo + hi);
        (detail_selfsim::tail_integral(c, alpha, mid) < tol ? hi : lo) = mid;
    }
    const std::size_t half_nodes = static_cast<std::size_t>(std::ceil(hi / ds)) + 1;
    p.s_max = static_cast<double>(half_nodes) * ds;
    p.tail_bound = detail_selfsim::tail_integral(c, alpha, p.s_max);

    const std::size_t total = 2 * half_nodes + 1;
    p.s_grid.resize(total);
    p.f.resize(total);
    p.nrm.resize(total);
    p.bin.resize(total);
    for (std::size_t i = 0; i < total; ++i)
        p.s_grid[i] = (static_cast<double>(i) - static_cast<double>(half_nodes)) * ds;

    auto rhs = [&](double s, const ode::state<9>& y) -> ode::state<9> {
        const double k = p.kappa(s);
        const double tau = p.torsion(s);
        // f' = k n, n' = -k f + tau b, b' = -tau n
        return {k * y[3],          k * y[4],          k * y[5],
                -k * y[0] + tau * y[6], -k * y[1] + tau * y[7], -k * y[2] + tau * y[8],
                -tau * y[3],       -tau * y[4],       -tau * y[5]};
    };

    const ode::state<9> y0 = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    auto store = [&](std::size_t idx, const ode::state<9>& y) {
        p.f[idx] = {y[0], y[1], y[2]};
        p.nrm[idx] = {y[3], y[4], y[5]};
        p.bin[idx] = {y[6], y[7], y[8]};
    };

    // node-by-node segments in both directions; the frame is snapped back to
    // orthonormal at every node, so the stored frame is exactly unit and the
    // correction stays a smooth function of s (no stencil-visible kinks)
    for (int dir : {+1, -1}) {
        ode::state<9> y = y0;
        store(half_nodes, y);
        for (std::size_t step = 1; step <= half_nodes; ++step) {
            const double s0 = static_cast<double>(dir) * static_cast<double>(step - 1) * ds;
            const double s1 = static_cast<double>(dir) * static_cast<double>(step) * ds;
            ode::dopri5_to_nodes<9>(rhs, y, {s0, s1}, tol,
                                    [&](double s, const ode::state<9>& ys) {
                                        if (s == s1) y = ys;
                                    });
            if (detail_selfsim::frame_drift(y) > tol)
                throw integration_error("build_profile: frame drift exceeded the tolerance");
            detail_selfsim::reorthonormalize(y);
            const std::size_t idx = (dir > 0) ? half_nodes + step : half_nodes - step;
            store(idx, y);
        }
    }

    p.a_plus = p.f.back();
    p.a_minus = p.f.front();
    return p;
}

// A+ as integrated, A- from the reflection symmetry (A1, -A2, -A3) of A+.
inline std::pair<vec3, vec3> limit_vectors(const Profile& p) {
    const vec3 ap = normalized(p.a_plus);
    return {ap, vec3{ap[0], -ap[1], -ap[2]}};
}

// opening angle between the limit vectors: cos(theta) = 2 A1^2 - 1
inline AngleResult angle(double c, double alpha, double tol) {
    const Profile p = build_profile(c, alpha, tol);
    const vec3 ap = limit_vectors(p).first;
    const double cosv = std::clamp(2.0 * ap[0] * ap[0] - 1.0, -1.0, 1.0);
    return AngleResult{std::acos(cosv), c, alpha};
}

inline double angle_of_profile(const Profile& p) {
    const vec3 ap = limit_vectors(p).first;
    return std::acos(std::clamp(2.0 * ap[0] * ap[0] - 1.0, -1.0, 1.0));
}

// m(x,t) = f(x / sqrt(t)); cubic Hermite on the s-grid (nodal derivatives are
// kappa * n), renormalized back to the sphere. Outside the grid the limit
// vector is returned; its error is bounded by tail_bound.
inline vec3 evaluate_m(const Profile& p, double x, double t) {
    if (!(t > 0.0)) throw std::domain_error("evaluate_m: t must be positive");
    const double s = x / std::sqrt(t);
    if (s >= p.s_max) return normalized(p.a_plus);
    if (s <= -p.s_max) return normalized(p.a_minus);

    const double fi = (s - p.s_grid.front()) / p.ds;
    std::size_t i0 = static_cast<std::size_t>(std::floor(fi));
    if (i0 + 1 >= p.s_grid.size()) i0 = p.s_grid.size() - 2;
    const double u = fi - static_cast<double>(i0);

    const vec3 f0 = p.f[i0], f1 = p.f[i0 + 1];
    const vec3 d0 = p.f_prime(i0), d1 = p.f_prime(i0 + 1);
    const double h00 = (1.0 + 2.0 * u) * sq(1.0 - u);
    const double h10 = u * sq(1.0 - u);
    const double h01 = u * u * (3.0 - 2.0 * u);
    const double h11 = u * u * (u - 1.0);
    const vec3 val = h00 * f0 + (h10 * p.ds) * d0 + h01 * f1 + (h11 * p.ds) * d1;
    return normalized(val);
}

// int |d_x m(x,t)|^2 dx by quadrature of the tangent derivative taken from
// the stored f samples (5-point differences), matching c^2 sqrt(2 pi/(alpha t))
inline double dirichlet_energy(const Profile& p, double t) {
    if (!(t > 0.0)) throw std::domain_error("dirichlet_energy: t must be positive");
    const std::size_t n = p.f.size();
    double acc = 0.0;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        const vec3 d = (1.0 / (12.0 * p.ds)) *
                       (p.f[i - 2] - 8.0 * p.f[i - 1] + 8.0 * p.f[i + 1] - p.f[i + 2]);
        const double w = (i == 2 || i + 3 == n) ? 0.5 : 1.0;
        acc += w * dot(d, d) * p.ds;
    }
    return acc / std::sqrt(t);
}

inline double dirichlet_energy_exact(double c, double alpha, double t) {
    return c * c * std::sqrt(2.0 * pi / (alpha * t));
}

// piecewise-constant two-sided data; the node nearest 0 takes the + value
inline SpinField step_data(const vec3& a_plus, const vec3& a_minus, const Grid1D& grid) {
    if (std::abs(norm(a_plus) - 1.0) > 1e-9 || std::abs(norm(a_minus) - 1.0) > 1e-9)
        throw std::invalid_argument("step_data: limit vectors must be unit");
    std::vector<vec3> v(grid.n);
    const std::size_t i0 = grid.index_nearest(0.0);
    for (std::size_t i = 0; i < grid.n; ++i)
        v[i] = (grid.x(i) > 0.0 || i == i0) ? a_plus : a_minus;
    return SpinField(grid, std::move(v), false);
}

// bisection for theta(c, alpha) = theta_target on a bracket where the angle
// straddles the target
inline double find_c_for_angle(double theta_target, double alpha, std::pair<double, double> bracket,
                               double tol) {
    if (!(tol > 0.0)) throw std::domain_error("find_c_for_angle: tol must be positive");
    const double build_tol = std::max(1e-12, std::min(1e-10, tol * 1e-2));
    auto theta_of = [&](double c) {
        return (c <= 0.0) ? 0.0 : angle(c, alpha, build_tol).theta;
    };
    double lo = bracket.first, hi = bracket.second;
    double th_lo = theta_of(lo), th_hi = theta_of(hi);
    if ((th_lo - theta_target) * (th_hi - theta_target) > 0.0)
        throw bracket_error("find_c_for_angle: bracket does not straddle the target angle");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double th = theta_of(mid);
        if (std::abs(th - theta_target) < tol) return mid;
        if ((th - theta_target) * (th_lo - theta_target) > 0.0) {
            lo = mid;
            th_lo = th;
        } else {
            hi = mid;
        }
    }
    throw integration_error("find_c_for_angle: bisection failed to meet tolerance");
}

struct MultiplicityResult {
    std::vector<double> cs;   // strictly increasing amplitudes, one per branch
    bool complete = false;    // all k requested roots found
    std::string diagnostics;  // set when a branch failed its sign condition
};

// The angle at alpha = 1 sweeps monotonically between 0 and pi on each branch
// [l sqrt(pi)/2, (l+1) sqrt(pi)/2]; for alpha near 1 the endpoint values are
// checked at runtime and a bracketed root is extracted per branch until k
// roots are found or a branch fails.
inline MultiplicityResult multiplicity_cs(double theta, double alpha, std::size_t k,
                                          double tol = 1e-9) {
    if (!(theta > 0.0) || !(theta < pi))
        throw std::domain_error("multiplicity_cs: theta must lie in (0, pi)");
    MultiplicityResult out;
    if (k == 0) {
        out.complete = true;
        return out;
    }
    const double build_tol = std::max(1e-12, std::min(1e-10, tol * 1e-2));
    auto theta_of = [&](double c) {
        return (c <= 1e-10) ? 0.0 : angle(c, alpha, build_tol).theta;
    };
    const double half = 0.5 * sqrt_pi;
    for (std::size_t branch = 0; out.cs.size() < k; ++branch) {
        const double a = static_cast<double>(branch) * half;
        const double b = a + half;
        const double th_a = theta_of(a);
        const double th_b = theta_of(b);
        if ((th_a - theta) * (th_b - theta) > 0.0) {
            std::ostringstream os;
            os << "branch " << branch << " [" << a << ", " << b
               << "] does not straddle theta: endpoints " << th_a << ", " << th_b;
            out.diagnostics = os.str();
            return out;
        }
        double lo = a, hi = b, th_lo = th_a;
        double root = 0.5 * (a + b);
        bool ok = false;
        for (int it = 0; it < 200; ++it) {
            root = 0.5 * (lo + hi);
            const double th = theta_of(root);
            if (std::abs(th - theta) < tol) {
                ok = true;
                break;
            }
            if ((th - theta) * (th_lo - theta) > 0.0) {
                lo = root;
                th_lo = th;
            } else {
                hi = root;
            }
        }
        if (!ok) {
            out.diagnostics = "bisection stalled on branch " + std::to_string(branch);
            return out;
        }
        out.cs.push_back(root);
    }
    out.complete = true;
    return out;
}

// max-norm residual of -s/2 f' = beta f x f'' - alpha f x (f x f'') over the
// interior of the s-grid, 5-point interior stencils
inline double profile_ode_residual(const Profile& p, bool perturb_f3 = false) {
    std::vector<vec3> f = p.f;
    if (perturb_f3)
        for (std::size_t i = 0; i < f.size(); ++i)
            f[i][2] += 0.01 * std::exp(-sq(p.s_grid[i]));

    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < f.size(); ++i) {
        const vec3 d1 = (1.0 / (12.0 * p.ds)) *
                        (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
        const vec3 d2 = (1.0 / (12.0 * p.ds * p.ds)) *
                        (-1.0 * f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] -
                         1.0 * f[i + 2]);
        const vec3 lhs = (-0.5 * p.s_grid[i]) * d1;
        const vec3 fxd2 = cross(f[i], d2);
        const vec3 rhs = p.beta * fxd2 - p.alpha * cross(f[i], fxd2);
        worst = std::max(worst, norm(lhs - rhs));
    }
    return worst;
}

// normal vector interpolated the same way as the tangent (nodal derivative
// n' = -kappa f + tau b), renormalized
inline vec3 evaluate_normal(const Profile& p, double s) {
    if (s >= p.s_max) return normalized(p.nrm.back());
    if (s <= -p.s_max) return normalized(p.nrm.front());
    const double fi = (s - p.s_grid.front()) / p.ds;
    std::size_t i0 = static_cast<std::size_t>(std::floor(fi));
    if (i0 + 1 >= p.s_grid.size()) i0 = p.s_grid.size() - 2;
    const double u = fi - static_cast<double>(i0);
    auto deriv = [&](std::size_t i) {
        return -1.0 * p.kappa(p.s_grid[i]) * p.f[i] + p.torsion(p.s_grid[i]) * p.bin[i];
    };
    const vec3 n0 = p.nrm[i0], n1 = p.nrm[i0 + 1];
    const vec3 d0 = deriv(i0), d1 = deriv(i0 + 1);
    const double h00 = (1.0 + 2.0 * u) * sq(1.0 - u);
    const double h10 = u * sq(1.0 - u);
    const double h01 = u * u * (3.0 - 2.0 * u);
    const double h11 = u * u * (u - 1.0);
    return normalized(h00 * n0 + (h10 * p.ds) * d0 + h01 * n1 + (h11 * p.ds) * d1);
}

// d_x m(x,t) = kappa(x/sqrt(t)) n(x/sqrt(t)) / sqrt(t)
inline vec3 evaluate_m_gradient(const Profile& p, double x, double t) {
    if (!(t > 0.0)) throw std::domain_error("evaluate_m_gradient: t must be positive");
    const double s = x / std::sqrt(t);
    if (std::abs(s) >= p.s_max) return {0.0, 0.0, 0.0};
    return (p.kappa(s) / std::sqrt(t)) * evaluate_normal(p, s);
}

// self-similar trajectory on a grid with the analytic gradients attached
inline SpinTrajectory sample_trajectory(const Profile& p, const Grid1D& grid,
                                        const std::vector<double>& times) {
    SpinTrajectory tr;
    tr.grid = grid;
    tr.times = times;
    tr.values.resize(times.size());
    tr.gradients.resize(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        tr.values[k].resize(grid.n);
        tr.gradients[k].resize(grid.n);
        for (std::size_t i = 0; i < grid.n; ++i) {
            tr.values[k][i] = evaluate_m(p, grid.x(i), times[k]);
            tr.gradients[k][i] = evaluate_m_gradient(p, grid.x(i), times[k]);
        }
    }
    return tr;
}

// alpha = 1 closed form: f(s) = (cos(c E(s)), sin(c E(s)), 0) with
// E(s) = int_0^s e^{-sigma^2/4} d sigma
inline vec3 explicit_profile_alpha1(double c, double s) {
    const double phase = c * special::gauss_quarter_integral(s);
    return {std::cos(phase), std::sin(phase), 0.0};
}

inline vec3 explicit_m_alpha1(double c, double x, double t) {
    return explicit_profile_alpha1(c, x / std::sqrt(t));
}

}  // namespace llgflow::selfsim
