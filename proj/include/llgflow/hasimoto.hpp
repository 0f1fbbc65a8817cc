// Filament function v = kappa e^{i int_0^x tau} and the nonlocal damped
// Schrodinger equations it satisfies, together with the explicit singular
// families v(x,t) = (c/sqrt(t)) e^{(-alpha+i beta) x^2/4t} (forced) and
// w(x,t) = (c/sqrt(t)) e^{i beta |c|^2 ln(t)/2 + (i beta - alpha) x^2/4t}
// (unforced), and the t -> 0 pairing experiments against test functions.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "core.hpp"
#include "derivatives.hpp"

namespace llgflow::hasimoto {

struct FilamentData {
    Grid1D grid;
    std::vector<double> curvature;  // kappa >= 0
    std::vector<double> torsion;    // tau

    void validate() const {
        grid.validate();
        if (curvature.size() != grid.n || torsion.size() != grid.n)
            throw std::invalid_argument("FilamentData: size mismatch");
        for (double k : curvature)
            if (!std::isfinite(k) || k < 0.0)
                throw std::invalid_argument("FilamentData: curvature must be finite and nonnegative");
        for (double t : torsion)
            if (!std::isfinite(t)) throw std::invalid_argument("FilamentData: torsion must be finite");
    }
};

// v(x) = kappa(x) exp(i int_0^x tau), signed cumulative trapezoid phase
inline ComplexField filament_function(const FilamentData& fd) {
    fd.validate();
    const std::vector<double> phase = detail::cumulative_from_zero(fd.grid, fd.torsion);
    std::vector<complexd> v(fd.grid.n);
    for (std::size_t i = 0; i < fd.grid.n; ++i)
        v[i] = fd.curvature[i] * std::exp(complexd(0.0, phase[i]));
    return ComplexField(fd.grid, std::move(v));
}

// curvature / torsion of the self-similar family at time t
inline FilamentData selfsim_filament(double c, const GLParams& p, double t, const Grid1D& grid) {
    if (!(t > 0.0)) throw std::domain_error("selfsim_filament: t must be positive");
    FilamentData fd;
    fd.grid = grid;
    fd.curvature.resize(grid.n);
    fd.torsion.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double x = grid.x(i);
        fd.curvature[i] = c / std::sqrt(t) * std::exp(-p.alpha * x * x / (4.0 * t));
        fd.torsion[i] = p.beta * x / (2.0 * t);
    }
    return fd;
}

inline complexd v_selfsim(double c, const GLParams& p, double x, double t) {
    if (!(t > 0.0)) throw std::domain_error("v_selfsim: t must be positive");
    return c / std::sqrt(t) * std::exp(complexd(-p.alpha, p.beta) * x * x / (4.0 * t));
}

// forcing A(t) = beta c^2 / t under which v_selfsim solves the nonlocal equation
inline double forcing_A(double c, const GLParams& p, double t) {
    if (!(t > 0.0)) throw std::domain_error("forcing_A: t must be positive");
    return p.beta * c * c / t;
}

// nonlocal term int_0^x Im(conj(v) d_x v) dy of v_selfsim in closed form
inline double nonlocal_term_selfsim(double c, const GLParams& p, double x, double t) {
    return p.beta * c * c / (2.0 * p.alpha * t) * (1.0 - std::exp(-p.alpha * x * x / (2.0 * t)));
}

inline complexd w_explicit(complexd c, const GLParams& p, double x, double t) {
    if (c == complexd(0.0, 0.0)) throw std::domain_error("w_explicit: c must be nonzero");
    if (!(t > 0.0)) throw std::domain_error("w_explicit: t must be positive");
    const double c2 = std::norm(c);
    const complexd expo = complexd(0.0, 0.5 * p.beta * c2 * std::log(t)) +
                          complexd(-p.alpha, p.beta) * x * x / (4.0 * t);
    return c / std::sqrt(t) * std::exp(expo);
}

namespace detail_hasimoto {

enum class SpaceDeriv { automatic, spectral, finite_difference };

inline void space_derivs(const Grid1D& grid, const std::vector<complexd>& u,
                         std::vector<complexd>& ux, std::vector<complexd>& uxx,
                         SpaceDeriv mode) {
    bool spectral = false;
    if (mode == SpaceDeriv::spectral) spectral = true;
    if (mode == SpaceDeriv::automatic)
        spectral = llgflow::detail::is_pow2(grid.n) && llgflow::detail::wrap_defect(u) < 1e-8;
    if (spectral) {
        ux = llgflow::detail::spectral_derivative(u, grid.period(), 1);
        uxx = llgflow::detail::spectral_derivative(u, grid.period(), 2);
    } else {
        ux = llgflow::detail::fd_gradient8(u, grid.spacing);
        uxx = llgflow::detail::fd_laplacian8(u, grid.spacing);
    }
}

}  // namespace detail_hasimoto

// max-norm residual of
//   i v_t + (beta - i alpha) v_xx + (v/2)(beta |v|^2 + 2 alpha int_0^x Im(conj v v_x) - A(t)) = 0
// over the interior time nodes; forcing(t) supplies A(t), zero for the
// unforced variant.
inline double residual_nonlocal(const ComplexTrajectory& tr, const GLParams& p,
                                const std::function<double(double)>& forcing,
                                detail_hasimoto::SpaceDeriv mode = detail_hasimoto::SpaceDeriv::automatic) {
    tr.validate();
    if (tr.times.size() < 3) throw std::invalid_argument("residual_nonlocal: need >= 3 time samples");
    const complexd coef(p.beta, -p.alpha);
    double worst = 0.0;
    const long margin = 4;
    for (std::size_t k = 1; k + 1 < tr.times.size(); ++k) {
        std::vector<complexd> ux, uxx;
        detail_hasimoto::space_derivs(tr.grid, tr.values[k], ux, uxx, mode);
        std::vector<double> integrand(tr.grid.n);
        for (std::size_t i = 0; i < tr.grid.n; ++i)
            integrand[i] = (std::conj(tr.values[k][i]) * ux[i]).imag();
        const std::vector<double> nonlocal = detail::cumulative_from_zero(tr.grid, integrand);
        const double A = forcing ? forcing(tr.times[k]) : 0.0;
        for (long i = margin; i + margin < static_cast<long>(tr.grid.n); ++i) {
            const auto idx = static_cast<std::size_t>(i);
            const complexd vt = detail::nonuniform_dt(tr.values[k - 1][idx], tr.values[k][idx],
                                                      tr.values[k + 1][idx], tr.times[k - 1],
                                                      tr.times[k], tr.times[k + 1]);
            const complexd v = tr.values[k][idx];
            const double pot = p.beta * std::norm(v) + 2.0 * p.alpha * nonlocal[idx] - A;
            const complexd res = complexd(0.0, 1.0) * vt + coef * uxx[idx] + 0.5 * v * pot;
            worst = std::max(worst, std::abs(res));
        }
    }
    return worst;
}

// unforced variant (the change-of-variables form of the same equation)
inline double residual_bis(const ComplexTrajectory& tr, const GLParams& p,
                           detail_hasimoto::SpaceDeriv mode = detail_hasimoto::SpaceDeriv::automatic) {
    return residual_nonlocal(tr, p, nullptr, mode);
}

// compactly supported test function over [lo, hi]
struct TestFunction {
    std::function<double(double)> phi;
    double lo = 0.0;
    double hi = 0.0;
};

// smooth bump supported on [lo, hi], phi(center) = 1
inline TestFunction bump_function(double lo, double hi) {
    TestFunction tf;
    tf.lo = lo;
    tf.hi = hi;
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    tf.phi = [mid, half](double x) {
        const double xi = (x - mid) / half;
        if (std::abs(xi) >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - xi * xi));
    };
    return tf;
}

namespace detail_hasimoto {

template <class F>
inline complexd adaptive_simpson(F&& f, double a, double b, double tol, int depth,
                                 complexd fa, complexd fm, complexd fb, complexd whole) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const complexd flm = f(lm), frm = f(rm);
    const complexd left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const complexd right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const complexd delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, 0.5 * tol, depth - 1, fa, flm, fm, left) +
           adaptive_simpson(f, m, b, 0.5 * tol, depth - 1, fm, frm, fb, right);
}

template <class F>
inline complexd integrate(F&& f, double a, double b, double tol = 1e-12) {
    if (!(b > a)) return complexd(0.0);
    const complexd fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const complexd whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, tol, 48, fa, fm, fb, whole);
}

}  // namespace detail_hasimoto

struct PairingSample {
    double t = 0.0;
    complexd value{0.0, 0.0};
    double modulus() const { return std::abs(value); }
    double phase() const { return std::arg(value); }
};

// int w(., t) phi dx for each t in the sequence; the quadrature window is the
// union of supp(phi) and the shrinking self-similar core +-20 sqrt(t) max(1, 1/sqrt(alpha))
inline std::vector<PairingSample> weak_limit_pairing(complexd c, const GLParams& p,
                                                     const TestFunction& phi,
                                                     const std::vector<double>& t_sequence) {
    std::vector<PairingSample> out;
    out.reserve(t_sequence.size());
    for (double t : t_sequence) {
        if (!(t > 0.0)) throw std::domain_error("weak_limit_pairing: times must be positive");
        const double core = 20.0 * std::sqrt(t) * std::max(1.0, 1.0 / std::sqrt(p.alpha));
        const double lo = std::min(phi.lo, -core);
        const double hi = std::max(phi.hi, core);
        auto integrand = [&](double x) -> complexd {
            const double ph = phi.phi(x);
            if (ph == 0.0) return complexd(0.0);
            return w_explicit(c, p, x, t) * ph;
        };
        PairingSample s;
        s.t = t;
        s.value = detail_hasimoto::integrate(integrand, lo, hi, 1e-12);
        out.push_back(s);
    }
    return out;
}

}  // namespace llgflow::hasimoto
