// Core value types shared by every module: 1-D uniform grids, complex and
// sphere-valued sample fields, damping parameters, small 3-vector algebra,
// and the error taxonomy the CLI maps to exit codes.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace llgflow {

using complexd = std::complex<double>;
using vec3 = std::array<double, 3>;

// ---------------------------------------------------------------------------
// errors

// Bad or inconsistent run configuration (CLI exit 2).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ODE / profile construction could not reach the requested tolerance (exit 3).
struct integration_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solution left the trusted regime: NaN or sup-norm past the ceiling (exit 4).
struct blowup_error : std::runtime_error {
    double t_last;
    blowup_error(const std::string& msg, double t) : std::runtime_error(msg), t_last(t) {}
};

// Root bracket does not straddle the target (exit 5).
struct bracket_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A sample came too close to the projection pole m3 = -1.
struct pole_error : std::runtime_error {
    double x;
    double m3;
    pole_error(const std::string& msg, double x_, double m3_)
        : std::runtime_error(msg), x(x_), m3(m3_) {}
};

// A time integral was requested outside the sampled trajectory window.
struct coverage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// vec3 algebra

inline vec3 operator+(const vec3& a, const vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline vec3 operator-(const vec3& a, const vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline vec3 operator*(double s, const vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

inline double dot(const vec3& a, const vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const vec3& a) { return std::sqrt(dot(a, a)); }

inline vec3 cross(const vec3& a, const vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline vec3 normalized(const vec3& a) {
    const double r = norm(a);
    if (r <= 0.0 || !std::isfinite(r)) throw std::invalid_argument("normalized: zero or non-finite vector");
    return (1.0 / r) * a;
}

inline double abs_of(const complexd& z) { return std::abs(z); }
inline double abs_of(const vec3& v) { return norm(v); }

struct mat3 {
    std::array<vec3, 3> row;  // row-major

    vec3 apply(const vec3& v) const { return {dot(row[0], v), dot(row[1], v), dot(row[2], v)}; }

    double det() const { return dot(row[0], cross(row[1], row[2])); }

    // max |R^T R - I| entry
    double orthogonality_defect() const {
        double worst = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += row[k][i] * row[k][j];
                worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
            }
        return worst;
    }

    static mat3 identity() { return {{vec3{1, 0, 0}, vec3{0, 1, 0}, vec3{0, 0, 1}}}; }

    // rotation by angle about a unit axis (Rodrigues)
    static mat3 axis_angle(const vec3& axis, double angle) {
        const vec3 u = normalized(axis);
        const double c = std::cos(angle), s = std::sin(angle), v = 1.0 - c;
        return {{vec3{c + u[0] * u[0] * v, u[0] * u[1] * v - u[2] * s, u[0] * u[2] * v + u[1] * s},
                 vec3{u[1] * u[0] * v + u[2] * s, c + u[1] * u[1] * v, u[1] * u[2] * v - u[0] * s},
                 vec3{u[2] * u[0] * v - u[1] * s, u[2] * u[1] * v + u[0] * s, c + u[2] * u[2] * v}}};
    }
};

// ---------------------------------------------------------------------------
// damping parameters: alpha in (0,1], beta = sqrt(1-alpha^2), dimension N

struct GLParams {
    double alpha = 1.0;
    double beta = 0.0;
    int dim = 1;

    static GLParams from_alpha(double alpha, int dim = 1) {
        if (!(alpha > 0.0) || alpha > 1.0) throw std::domain_error("GLParams: alpha must lie in (0,1]");
        if (dim < 1) throw std::domain_error("GLParams: dim must be >= 1");
        GLParams p;
        p.alpha = alpha;
        p.beta = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
        p.dim = dim;
        return p;
    }

    void validate() const {
        if (!(alpha > 0.0) || alpha > 1.0) throw std::domain_error("GLParams: alpha must lie in (0,1]");
        if (std::abs(alpha * alpha + beta * beta - 1.0) > 1e-14)
            throw std::domain_error("GLParams: alpha^2 + beta^2 != 1");
        if (dim < 1) throw std::domain_error("GLParams: dim must be >= 1");
    }

    // alpha + i*beta, the diffusion coefficient of the semigroup
    complexd w() const { return complexd(alpha, beta); }
};

// ---------------------------------------------------------------------------
// uniform 1-D grid

struct Grid1D {
    double origin = 0.0;   // leftmost sample coordinate
    double spacing = 0.0;  // grid step h > 0
    std::size_t n = 0;     // sample count

    static Grid1D centered(double half_width, std::size_t n) {
        if (n < 2) throw std::invalid_argument("Grid1D: need at least 2 samples");
        if (!(half_width > 0.0)) throw std::invalid_argument("Grid1D: half_width must be positive");
        return Grid1D{-half_width, 2.0 * half_width / static_cast<double>(n), n};
    }

    double x(std::size_t i) const { return origin + spacing * static_cast<double>(i); }
    double period() const { return spacing * static_cast<double>(n); }
    double extent() const { return 0.5 * period(); }  // domain half-width
    double x_min() const { return origin; }
    double x_max() const { return origin + spacing * static_cast<double>(n - 1); }

    std::size_t index_nearest(double x0) const {
        double fi = (x0 - origin) / spacing;
        if (fi <= 0.0) return 0;
        if (fi >= static_cast<double>(n - 1)) return n - 1;
        return static_cast<std::size_t>(std::llround(fi));
    }

    void validate() const {
        if (!(spacing > 0.0)) throw std::invalid_argument("Grid1D: spacing must be positive");
        if (n < 2) throw std::invalid_argument("Grid1D: need at least 2 samples");
    }

    bool same_as(const Grid1D& o, double tol = 1e-12) const {
        return n == o.n && std::abs(origin - o.origin) <= tol && std::abs(spacing - o.spacing) <= tol;
    }
};

// ---------------------------------------------------------------------------
// sample fields

struct ComplexField {
    Grid1D grid;
    std::vector<complexd> values;

    ComplexField() = default;
    ComplexField(Grid1D g, std::vector<complexd> v) : grid(g), values(std::move(v)) {
        grid.validate();
        if (values.size() != grid.n) throw std::invalid_argument("ComplexField: size mismatch");
    }

    static ComplexField constant(Grid1D g, complexd q) {
        return ComplexField(g, std::vector<complexd>(g.n, q));
    }

    template <class F>
    static ComplexField sample(Grid1D g, F&& f) {
        std::vector<complexd> v(g.n);
        for (std::size_t i = 0; i < g.n; ++i) v[i] = f(g.x(i));
        return ComplexField(g, std::move(v));
    }

    void require_finite(const char* who) const {
        for (std::size_t i = 0; i < values.size(); ++i)
            if (!std::isfinite(values[i].real()) || !std::isfinite(values[i].imag()))
                throw std::invalid_argument(std::string(who) + ": non-finite sample at x=" +
                                            std::to_string(grid.x(i)));
    }

    double sup_abs() const {
        double s = 0.0;
        for (const auto& z : values) s = std::max(s, std::abs(z));
        return s;
    }
};

// Plain 3-vector field (no unit-length requirement); gradients live here.
struct Vec3Field {
    Grid1D grid;
    std::vector<vec3> values;

    Vec3Field() = default;
    Vec3Field(Grid1D g, std::vector<vec3> v) : grid(g), values(std::move(v)) {
        grid.validate();
        if (values.size() != grid.n) throw std::invalid_argument("Vec3Field: size mismatch");
    }

    template <class F>
    static Vec3Field sample(Grid1D g, F&& f) {
        std::vector<vec3> v(g.n);
        for (std::size_t i = 0; i < g.n; ++i) v[i] = f(g.x(i));
        return Vec3Field(g, std::move(v));
    }

    double sup_norm() const {
        double s = 0.0;
        for (const auto& v : values) s = std::max(s, norm(v));
        return s;
    }
};

// Sphere-valued field: every sample must sit on S^2 within unit_tol.
struct SpinField : Vec3Field {
    static constexpr double unit_tol = 1e-12;

    SpinField() = default;
    SpinField(Grid1D g, std::vector<vec3> v, bool check = true) : Vec3Field(g, std::move(v)) {
        if (check) require_unit("SpinField");
    }

    static SpinField constant(Grid1D g, const vec3& q) {
        return SpinField(g, std::vector<vec3>(g.n, q));
    }

    template <class F>
    static SpinField sample(Grid1D g, F&& f) {
        std::vector<vec3> v(g.n);
        for (std::size_t i = 0; i < g.n; ++i) v[i] = f(g.x(i));
        return SpinField(g, std::move(v));
    }

    void require_unit(const char* who) const {
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double r = norm(values[i]);
            if (!std::isfinite(r) || std::abs(r - 1.0) > unit_tol)
                throw std::invalid_argument(std::string(who) + ": |m| != 1 at x=" +
                                            std::to_string(grid.x(i)) + " (|m|=" + std::to_string(r) + ")");
        }
    }

    double min_m3() const {
        double s = std::numeric_limits<double>::infinity();
        for (const auto& v : values) s = std::min(s, v[2]);
        return s;
    }
};

// ---------------------------------------------------------------------------
// time-indexed sequence of fields on one spatial grid

template <class V>
struct Trajectory {
    Grid1D grid;
    std::vector<double> times;                 // strictly increasing, > 0
    std::vector<std::vector<V>> values;        // one row per time
    std::vector<std::vector<V>> gradients;     // optional, same layout

    std::size_t steps() const { return times.size(); }
    bool has_gradients() const { return gradients.size() == times.size() && !times.empty(); }

    void validate() const {
        grid.validate();
        if (times.size() != values.size()) throw std::invalid_argument("Trajectory: times/fields mismatch");
        double prev = 0.0;
        for (double t : times) {
            if (!(t > prev)) throw std::invalid_argument("Trajectory: times must be strictly increasing and positive");
            prev = t;
        }
        for (const auto& row : values)
            if (row.size() != grid.n) throw std::invalid_argument("Trajectory: field size mismatch");
        if (!gradients.empty() && gradients.size() != times.size())
            throw std::invalid_argument("Trajectory: gradient rows mismatch");
    }
};

using ComplexTrajectory = Trajectory<complexd>;
using SpinTrajectory = Trajectory<vec3>;

// ---------------------------------------------------------------------------
// misc small helpers

inline double sq(double x) { return x * x; }

constexpr double pi = 3.14159265358979323846264338327950288;
constexpr double sqrt_pi = 1.77245385090551602729816748334114518;

}  // namespace llgflow
