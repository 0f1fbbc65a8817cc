// Stereographic projection from the South Pole and its inverse, mapping
// sphere-valued fields to complex ones and back, plus pointwise rotation.
// The projection refuses samples within the given margin of the pole rather
// than returning infinities.
#pragma once

#include <cmath>
#include <string>

#include "core.hpp"

namespace llgflow::stereo {

// u = (m1 + i m2) / (1 + m3); requires m3 >= -1 + delta everywhere
inline ComplexField project(const SpinField& m, double delta) {
    if (!(delta > 0.0) || delta > 2.0) throw std::domain_error("project: delta must lie in (0,2]");
    std::vector<complexd> out(m.grid.n);
    for (std::size_t i = 0; i < m.grid.n; ++i) {
        const vec3& v = m.values[i];
        if (v[2] < -1.0 + delta)
            throw pole_error("project: sample at x=" + std::to_string(m.grid.x(i)) +
                                 " has m3=" + std::to_string(v[2]) + " < -1+delta",
                             m.grid.x(i), v[2]);
        out[i] = complexd(v[0], v[1]) / (1.0 + v[2]);
    }
    return ComplexField(m.grid, std::move(out));
}

inline vec3 inverse_point(complexd u) {
    const double r2 = std::norm(u);
    const double den = 1.0 + r2;
    return {2.0 * u.real() / den, 2.0 * u.imag() / den, (1.0 - r2) / den};
}

// m1 = 2 Re u / (1+|u|^2), m2 = 2 Im u / (1+|u|^2), m3 = (1-|u|^2)/(1+|u|^2)
inline SpinField inverse_project(const ComplexField& u) {
    u.require_finite("inverse_project");
    std::vector<vec3> out(u.grid.n);
    for (std::size_t i = 0; i < u.grid.n; ++i) out[i] = inverse_point(u.values[i]);
    return SpinField(u.grid, std::move(out));
}

inline SpinField rotate(const SpinField& m, const mat3& R) {
    if (R.orthogonality_defect() > 1e-12 || std::abs(R.det() - 1.0) > 1e-12)
        throw std::invalid_argument("rotate: matrix is not a proper rotation");
    std::vector<vec3> out(m.grid.n);
    for (std::size_t i = 0; i < m.grid.n; ++i) out[i] = R.apply(m.values[i]);
    return SpinField(m.grid, std::move(out));
}

// Gradient transported through the projection: exact chain rule, used by the
// fixtures that carry analytic derivatives.
inline complexd project_gradient(const vec3& m, const vec3& dm) {
    const complexd dcheck(dm[0], dm[1]);
    const complexd check(m[0], m[1]);
    const double den = 1.0 + m[2];
    return dcheck / den - check * dm[2] / (den * den);
}

// Gradient transported through the inverse projection.
inline vec3 inverse_gradient(complexd u, complexd du) {
    const double r2 = std::norm(u);
    const double den = 1.0 + r2;
    const double re_ubar_du = (std::conj(u) * du).real();
    const complexd dcheck = 2.0 * du / den - 4.0 * u * re_ubar_du / (den * den);
    const double dm3 = -4.0 * re_ubar_du / (den * den);
    return {dcheck.real(), dcheck.imag(), dm3};
}

}  // namespace llgflow::stereo
