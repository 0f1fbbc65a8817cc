// Scalar special functions: the exponential integral E1, the non-normalized
// error-function integral of the profile construction, and the error function
// of complex argument that evaluates the semigroup on jump data.
//
// E1 follows the classical split: alternating series for y <= 1, modified
// Lentz continued fraction above. The complex erf switches at |z| = 4 from
// the Taylor series (accumulated in long double) to erfc through the
// Faddeeva function, the latter evaluated by Weideman's rational
// approximation, which stays uniformly accurate up to the sector boundary
// arg z = pi/4 where plain asymptotic fractions degrade. Both branches hold
// 1e-12 on the arguments the semigroup produces.
#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "core.hpp"

namespace llgflow::special {

constexpr double euler_gamma = 0.57721566490153286060651209008240243;

// E1(y) = \int_y^infty e^{-z}/z dz, y > 0
inline double e1(double y) {
    if (!(y > 0.0)) throw std::domain_error("e1: argument must be positive");
    if (y <= 1.0) {
        double sum = -euler_gamma - std::log(y);
        double pow_term = 1.0;  // y^k / k!
        for (int k = 1; k <= 64; ++k) {
            pow_term *= y / static_cast<double>(k);
            const double add = pow_term / static_cast<double>(k);
            sum += (k % 2 == 1) ? add : -add;
            if (add < 1e-18 * std::max(1.0, std::abs(sum))) break;
        }
        return sum;
    }
    // modified Lentz on E1(y) = e^{-y} / (y + 1 - 1/(y + 3 - 4/(y + 5 - ...)))
    const double tiny = 1e-300;
    double b = y + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 400; ++i) {
        const double a = -static_cast<double>(i) * static_cast<double>(i);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 5e-17) break;
    }
    return h * std::exp(-y);
}

// \int_0^s e^{-sigma^2/4} d sigma = sqrt(pi) * erf(s/2); tends to sqrt(pi).
inline double gauss_quarter_integral(double s) { return sqrt_pi * std::erf(0.5 * s); }

namespace detail {

inline complexd erf_series(complexd z) {
    // erf(z) = (2/sqrt(pi)) sum_k (-1)^k z^{2k+1} / (k! (2k+1)), long double sums
    using cl = std::complex<long double>;
    const cl zl(static_cast<long double>(z.real()), static_cast<long double>(z.imag()));
    const cl z2 = zl * zl;
    cl p(1.0L, 0.0L);  // (-1)^k z^{2k} / k!
    cl sum = zl;
    for (int k = 1; k <= 256; ++k) {
        p *= -z2 / static_cast<long double>(k);
        const cl term = p * zl / static_cast<long double>(2 * k + 1);
        sum += term;
        if (std::abs(term) < 1e-20L * std::max<long double>(1.0L, std::abs(sum))) break;
    }
    const long double two_over_sqrt_pi = 1.12837916709551257389615890312154517L;
    sum *= two_over_sqrt_pi;
    return complexd(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
}

// Faddeeva function w(z) = e^{-z^2} erfc(-iz) for Im z >= 0, by Weideman's
// rational approximation with N = 64 terms (coefficients built once from a
// 256-point DFT of the weight e^{-t^2}(L^2+t^2) on the tangent grid).
inline complexd faddeeva_w(complexd z) {
    constexpr int N = 64;
    constexpr int M = 2 * N;
    constexpr int M2 = 4 * N;
    static const double L = std::sqrt(static_cast<double>(N) / std::sqrt(2.0));
    static const std::vector<double> coeff = [] {
        std::vector<complexd> f(M2, complexd(0.0));
        // samples at theta = j pi / M in DFT order; tan(+-pi/2) maps to zero weight
        for (int j = -M + 1; j <= M - 1; ++j) {
            const double theta = static_cast<double>(j) * pi / M;
            const double t = L * std::tan(0.5 * theta);
            const double val = std::exp(-t * t) * (L * L + t * t);
            const int idx = (j + M2) % M2;
            f[static_cast<std::size_t>(idx)] = complexd(val, 0.0);
        }
        // naive DFT of a 256-point real sequence, done once
        std::vector<double> a(N);
        for (int k = 1; k <= N; ++k) {
            double acc = 0.0;
            for (int j = 0; j < M2; ++j)
                acc += f[static_cast<std::size_t>(j)].real() *
                       std::cos(2.0 * pi * static_cast<double>(j) * static_cast<double>(k) / M2);
            a[static_cast<std::size_t>(N - k)] = acc / M2;
        }
        return a;
    }();

    const complexd iz(- z.imag(), z.real());
    const complexd denom = L - iz;
    const complexd Z = (L + iz) / denom;
    complexd p(0.0);
    for (int k = 0; k < N; ++k) p = p * Z + coeff[static_cast<std::size_t>(k)];
    return 2.0 * p / (denom * denom) + (1.0 / sqrt_pi) / denom;
}

}  // namespace detail

// Error function of a complex argument (entire function, odd).
inline complexd erf(complexd z) {
    if (z.real() < 0.0) return -erf(-z);
    if (std::abs(z) <= 4.0) return detail::erf_series(z);
    // erfc(z) = e^{-z^2} w(iz); Im(iz) = Re z >= 0 keeps w on its half-plane
    const complexd izu(-z.imag(), z.real());
    return 1.0 - std::exp(-z * z) * detail::faddeeva_w(izu);
}

inline complexd erfc(complexd z) { return 1.0 - erf(z); }

}  // namespace llgflow::special
