// The damped Schrodinger (complex Ginzburg-Landau) semigroup S(t) = e^{(a+ib)t Lap}.
//
// Three realizations:
//   kernel_value   - the complex Gaussian kernel itself, principal branch;
//   apply          - Fourier multiplier e^{-(a+ib) xi^2 t} on a periodic grid;
//   apply_kernel   - truncated convolution with exact per-cell kernel masses
//                    and edge-clamped extension, safe for step-like fields
//                    whose periodic wrap would pollute the spectral path;
//   apply_to_step  - closed form on two-sided jump data through the complex
//                    error function, exact at any (x, t).
#pragma once

#include <cmath>
#include <complex>
#include <iostream>
#include <map>
#include <vector>

#include "core.hpp"
#include "derivatives.hpp"
#include "fft.hpp"
#include "special.hpp"

namespace llgflow::semigroup {

// G(x,t) = exp(-|x|^2 / (4(a+ib)t)) / (4 pi (a+ib) t)^{N/2}
inline complexd kernel_value(double x, double t, const GLParams& p) {
    p.validate();
    if (!(t > 0.0)) throw std::domain_error("kernel_value: t must be positive");
    const complexd w = p.w();
    const complexd denom = std::pow(4.0 * pi * w * t, 0.5 * static_cast<double>(p.dim));
    return std::exp(-x * x / (4.0 * w * t)) / denom;
}

// Spectral application on the periodic grid. Emits a stderr warning when the
// Nyquist mode carries more than 1e-12 of the spectrum (aliasing made visible).
inline ComplexField apply(const ComplexField& u, double t, const GLParams& p) {
    p.validate();
    if (p.dim != 1) throw std::invalid_argument("semigroup::apply: only N=1 grids are supported");
    if (t < 0.0) throw std::domain_error("semigroup::apply: t must be nonnegative");
    u.require_finite("semigroup::apply");
    if (t == 0.0) return u;

    std::vector<complexd> a = u.values;
    detail::fft_inplace(a, false);

    double sup_hat = 0.0;
    for (const auto& z : a) sup_hat = std::max(sup_hat, std::abs(z));
    const std::size_t nyq = a.size() / 2;
    if (sup_hat > 0.0 && std::abs(a[nyq]) > 1e-12 * sup_hat)
        std::cerr << "semigroup::apply: warning: Nyquist mode holds "
                  << std::abs(a[nyq]) / sup_hat << " of the spectrum; field is under-resolved\n";

    const complexd w = p.w();
    const double period = u.grid.period();
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double xi = 2.0 * pi * detail::signed_mode(k, a.size()) / period;
        a[k] *= std::exp(-w * xi * xi * t);
    }
    detail::fft_inplace(a, true);
    return ComplexField(u.grid, std::move(a));
}

namespace detail_kernel {

// Discrete kernel: w_m = mass of G over the cell of width h centred at m*h,
// evaluated exactly through the complex error function. Support radius is
// 12 sqrt(t/alpha), past which the remaining mass is below 1e-14.
struct DiscreteKernel {
    long k = 0;                     // support half-width in cells
    std::vector<complexd> w;        // weights for offsets -k..k, size 2k+1
};

inline DiscreteKernel build(double h, double t, const GLParams& p) {
    DiscreteKernel ker;
    const double radius = 12.0 * std::sqrt(t / p.alpha);
    ker.k = std::max<long>(1, static_cast<long>(std::ceil(radius / h)));
    const complexd tau = 2.0 * std::sqrt(p.w() * t);  // principal root
    ker.w.resize(static_cast<std::size_t>(2 * ker.k + 1));
    // cell mass = (erf(((m+1/2)h)/tau) - erf(((m-1/2)h)/tau)) / 2; endpoints shared
    complexd prev = special::erf((-(static_cast<double>(ker.k) + 0.5) * h) / tau);
    for (long m = -ker.k; m <= ker.k; ++m) {
        const complexd next = special::erf(((static_cast<double>(m) + 0.5) * h) / tau);
        ker.w[static_cast<std::size_t>(m + ker.k)] = 0.5 * (next - prev);
        prev = next;
    }
    return ker;
}

// Padded circular convolution with edge-clamped extension. The cell-mass
// weights act as (exact symbol) x (box filter sinc(xi h/2)); dividing the
// kernel's DFT by that sinc removes the box-filter bias at every represented
// frequency, so resolved fields see the exact multiplier while constants and
// mass stay untouched (sinc(0) = 1, no zero below Nyquist).
inline std::vector<complexd> convolve_fft(const std::vector<complexd>& u,
                                          const DiscreteKernel& ker) {
    const std::size_t n = u.size();
    const std::size_t halo = static_cast<std::size_t>(ker.k) + 8;
    const std::size_t need = n + 2 * halo;
    std::size_t p2 = 1;
    while (p2 < need) p2 <<= 1;

    // field extended by its edge values into the halo, then zero pad
    std::vector<complexd> ext(p2, complexd(0.0));
    for (std::size_t i = 0; i < halo; ++i) ext[i] = u.front();
    for (std::size_t i = 0; i < n; ++i) ext[halo + i] = u[i];
    for (std::size_t i = 0; i < halo; ++i) ext[halo + n + i] = u.back();

    std::vector<complexd> kr(p2, complexd(0.0));
    for (long m = -ker.k; m <= ker.k; ++m) {
        const std::size_t pos =
            static_cast<std::size_t>((m + static_cast<long>(p2)) % static_cast<long>(p2));
        kr[pos] = ker.w[static_cast<std::size_t>(m + ker.k)];
    }

    llgflow::detail::fft_inplace(ext, false);
    llgflow::detail::fft_inplace(kr, false);
    for (std::size_t i = 0; i < p2; ++i) {
        const double q = pi * llgflow::detail::signed_mode(i, p2) / static_cast<double>(p2);
        const double sinc = (q == 0.0) ? 1.0 : std::sin(q) / q;
        ext[i] *= kr[i] / sinc;
    }
    llgflow::detail::fft_inplace(ext, true);

    std::vector<complexd> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = ext[halo + i];
    return out;
}

}  // namespace detail_kernel

// Cache of discrete kernels keyed by (h, t); solvers reuse steps heavily.
class KernelCache {
  public:
    const detail_kernel::DiscreteKernel& get(double h, double t, const GLParams& p) {
        const auto key = std::make_pair(h, t);
        auto it = cache_.find(key);
        if (it == cache_.end()) it = cache_.emplace(key, detail_kernel::build(h, t, p)).first;
        return it->second;
    }

  private:
    std::map<std::pair<double, double>, detail_kernel::DiscreteKernel> cache_;
};

// Truncated-kernel application with edge-clamped (constant) extension.
inline ComplexField apply_kernel(const ComplexField& u, double t, const GLParams& p,
                                 KernelCache* cache = nullptr) {
    p.validate();
    if (p.dim != 1) throw std::invalid_argument("semigroup::apply_kernel: only N=1");
    if (t < 0.0) throw std::domain_error("semigroup::apply_kernel: t must be nonnegative");
    u.require_finite("semigroup::apply_kernel");
    if (t == 0.0) return u;

    detail_kernel::DiscreteKernel local;
    const detail_kernel::DiscreteKernel* ker;
    if (cache) {
        ker = &cache->get(u.grid.spacing, t, p);
    } else {
        local = detail_kernel::build(u.grid.spacing, t, p);
        ker = &local;
    }
    return ComplexField(u.grid, detail_kernel::convolve_fft(u.values, *ker));
}

// Exact value of S(t) applied to a+ chi_{x>0} + a- chi_{x<0} at a single point:
//   (a+ + a-)/2 + (a+ - a-)/2 * erf(x / (2 sqrt((alpha+i beta) t))).
inline complexd apply_to_step(complexd a_plus, complexd a_minus, double x, double t,
                              const GLParams& p) {
    p.validate();
    if (p.dim != 1) throw std::invalid_argument("apply_to_step: only N=1");
    if (!(t > 0.0)) throw std::domain_error("apply_to_step: t must be positive");
    if (x == 0.0) return 0.5 * (a_plus + a_minus);
    const complexd q = x / (2.0 * std::sqrt(p.w() * t));
    return 0.5 * (a_plus + a_minus) + 0.5 * (a_plus - a_minus) * special::erf(q);
}

// Spatial derivative of the same closed form: (a+ - a-) G(x,t).
inline complexd step_gradient(complexd a_plus, complexd a_minus, double x, double t,
                              const GLParams& p) {
    if (!(t > 0.0)) throw std::domain_error("step_gradient: t must be positive");
    return (a_plus - a_minus) * kernel_value(x, t, p);
}

}  // namespace llgflow::semigroup
