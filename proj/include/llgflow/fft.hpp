// Iterative radix-2 FFT, enough for the power-of-two periodic grids the
// spectral paths require. Forward transform uses e^{-i 2pi jk/n}; the inverse
// divides by n.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "core.hpp"

namespace llgflow::detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline void fft_inplace(std::vector<complexd>& a, bool inverse) {
    const std::size_t n = a.size();
    if (!is_pow2(n)) throw std::invalid_argument("fft: length must be a power of two");
    if (n == 1) return;

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    // one table of n/2 twiddles, reused at every level through the stride
    std::vector<complexd> tw(n / 2);
    const double sgn = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double ang = sgn * 2.0 * pi * static_cast<double>(k) / static_cast<double>(n);
        tw[k] = complexd(std::cos(ang), std::sin(ang));
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const complexd w = tw[k * stride];
                const complexd u = a[i + k];
                const complexd v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }

    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv;
    }
}

// signed wavenumber index: k -> k for k < n/2, k - n otherwise
inline double signed_mode(std::size_t k, std::size_t n) {
    return (k < n / 2) ? static_cast<double>(k)
                       : static_cast<double>(k) - static_cast<double>(n);
}

}  // namespace llgflow::detail
