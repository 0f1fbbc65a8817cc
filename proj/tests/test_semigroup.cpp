#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "llgflow/semigroup.hpp"
#include "oracles.hpp"

using namespace llgflow;

namespace {

ComplexField band_limited_field(const Grid1D& g, std::mt19937_64& rng, int max_mode = 20) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<complexd> hat(g.n, complexd(0.0));
    for (int k = 1; k <= max_mode; ++k) {
        hat[static_cast<std::size_t>(k)] = complexd(uni(rng), uni(rng));
        hat[g.n - static_cast<std::size_t>(k)] = complexd(uni(rng), uni(rng));
    }
    hat[0] = complexd(uni(rng), uni(rng));
    detail::fft_inplace(hat, true);
    return ComplexField(g, std::move(hat));
}

}  // namespace

TEST_CASE("kernel point values") {
    const GLParams heat = GLParams::from_alpha(1.0);
    CHECK(std::abs(semigroup::kernel_value(0.0, 1.0 / (4.0 * pi), heat) - complexd(1.0, 0.0)) <
          1e-14);
    CHECK(semigroup::kernel_value(0.0, 1.0, heat).real() ==
          Catch::Approx(1.0 / std::sqrt(4.0 * pi)).epsilon(1e-14));

    // |G(x,t)| = e^{-alpha x^2/(4t)} / (4 pi t)^{1/2}, checked from |exp(z)| = e^{Re z}
    const GLParams p = GLParams::from_alpha(0.5);
    const double expected = std::exp(-0.5 * 4.0 / 4.0) / std::sqrt(4.0 * pi);
    CHECK(std::abs(semigroup::kernel_value(2.0, 1.0, p)) == Catch::Approx(expected).epsilon(1e-13));

    CHECK_THROWS_AS(semigroup::kernel_value(0.0, 0.0, heat), std::domain_error);
    CHECK_THROWS_AS(semigroup::kernel_value(0.0, -1.0, heat), std::domain_error);
}

TEST_CASE("kernel mass is one over a 10 sqrt(t/alpha) truncation") {
    const GLParams p = GLParams::from_alpha(0.7);
    const double t = 0.3;
    const double R = 10.0 * std::sqrt(t / p.alpha);
    const std::size_t n = 20000;
    const double h = 2.0 * R / static_cast<double>(n);
    complexd acc(0.0);
    for (std::size_t i = 0; i <= n; ++i) {
        const double x = -R + h * static_cast<double>(i);
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        acc += w * semigroup::kernel_value(x, t, p);
    }
    acc *= h;
    CHECK(std::abs(acc - complexd(1.0, 0.0)) < 1e-8);
}

TEST_CASE("spectral apply: constants, closed-form Gaussian, semigroup law") {
    const Grid1D g = Grid1D::centered(12.0, 1024);
    const GLParams heat = GLParams::from_alpha(1.0);

    SECTION("constants are fixed points") {
        const ComplexField q = ComplexField::constant(g, complexd(0.3, -0.8));
        const ComplexField out = semigroup::apply(q, 0.7, heat);
        for (std::size_t i = 0; i < g.n; ++i)
            CHECK(std::abs(out.values[i] - q.values[i]) < 1e-13);
    }

    SECTION("t = 0 returns the field unchanged") {
        const ComplexField u = ComplexField::sample(g, [](double x) { return std::exp(-x * x); });
        const ComplexField out = semigroup::apply(u, 0.0, heat);
        for (std::size_t i = 0; i < g.n; ++i) CHECK(out.values[i] == u.values[i]);
    }

    SECTION("heat evolution of a Gaussian matches (1+4t)^{-1/2} e^{-x^2/(1+4t)}") {
        const ComplexField u = ComplexField::sample(g, [](double x) { return std::exp(-x * x); });
        const double t = 0.25;
        const ComplexField out = semigroup::apply(u, t, heat);
        CHECK(std::abs(out.values[g.n / 2] - complexd(1.0 / std::sqrt(2.0), 0.0)) < 1e-10);
        for (std::size_t i = 0; i < g.n; i += 7) {
            const double x = g.x(i);
            const double ref = std::exp(-x * x / (1.0 + 4.0 * t)) / std::sqrt(1.0 + 4.0 * t);
            CHECK(std::abs(out.values[i] - complexd(ref, 0.0)) < 1e-10);
        }
    }

    SECTION("real damping path keeps real data real") {
        const ComplexField u = ComplexField::sample(g, [](double x) { return std::exp(-x * x); });
        const ComplexField out = semigroup::apply(u, 0.4, heat);
        for (std::size_t i = 0; i < g.n; ++i) CHECK(std::abs(out.values[i].imag()) < 1e-12);
    }

    SECTION("semigroup law and sup bound on band-limited fields") {
        std::mt19937_64 rng(3);
        for (double alpha : {1.0, 0.6, 0.25}) {
            const GLParams p = GLParams::from_alpha(alpha);
            const ComplexField u = band_limited_field(g, rng);
            const ComplexField one = semigroup::apply(semigroup::apply(u, 0.33, p), 0.44, p);
            const ComplexField two = semigroup::apply(u, 0.77, p);
            double worst = 0.0;
            for (std::size_t i = 0; i < g.n; ++i)
                worst = std::max(worst, std::abs(one.values[i] - two.values[i]));
            CHECK(worst <= 1e-10 * u.sup_abs());

            for (double t : {0.05, 0.5, 2.0}) {
                const ComplexField st = semigroup::apply(u, t, p);
                CHECK(st.sup_abs() <= std::pow(alpha, -0.5) * u.sup_abs() * (1.0 + 1e-10));
            }
        }
    }

    SECTION("input validation") {
        ComplexField u = ComplexField::constant(g, complexd(1.0, 0.0));
        CHECK_THROWS_AS(semigroup::apply(u, -0.1, heat), std::domain_error);
        u.values[3] = complexd(std::numeric_limits<double>::quiet_NaN(), 0.0);
        CHECK_THROWS_AS(semigroup::apply(u, 0.1, heat), std::invalid_argument);
    }
}

TEST_CASE("kernel-path apply agrees with the spectral path on decaying fields") {
    const Grid1D g = Grid1D::centered(14.0, 1024);
    for (double alpha : {1.0, 0.6}) {
        const GLParams p = GLParams::from_alpha(alpha);
        const ComplexField u = ComplexField::sample(g, [&](double x) {
            return std::exp(-0.5 * x * x) * complexd(std::cos(2.0 * x), std::sin(1.3 * x));
        });
        for (double t : {0.01, 0.2, 1.0}) {
            const ComplexField a = semigroup::apply(u, t, p);
            const ComplexField b = semigroup::apply_kernel(u, t, p);
            double worst = 0.0;
            for (std::size_t i = 0; i < g.n; ++i)
                worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
            CHECK(worst < 1e-9);
        }
    }

    SECTION("kernel path is exact on constants up to the truncated tail") {
        const GLParams p = GLParams::from_alpha(0.8);
        const ComplexField q = ComplexField::constant(g, complexd(-0.4, 0.9));
        const ComplexField out = semigroup::apply_kernel(q, 0.5, p);
        for (std::size_t i = 0; i < g.n; ++i)
            CHECK(std::abs(out.values[i] - q.values[i]) < 1e-12);
    }
}

TEST_CASE("step action: midpoint, constants, quadrature oracle, small-time limit") {
    const GLParams heat = GLParams::from_alpha(1.0);
    const GLParams mixed = GLParams::from_alpha(0.6);

    SECTION("x = 0 gives the midpoint value") {
        const complexd ap(0.3, 0.7), am(-0.2, 0.1);
        for (double t : {0.01, 1.0, 9.0})
            CHECK(std::abs(semigroup::apply_to_step(ap, am, 0.0, t, mixed) - 0.5 * (ap + am)) <
                  1e-14);
    }

    SECTION("equal sides reproduce the constant") {
        const complexd q(0.9, -0.4);
        for (double x : {-3.0, 0.4, 7.0})
            CHECK(std::abs(semigroup::apply_to_step(q, q, x, 0.8, mixed) - q) < 1e-13);
    }

    SECTION("sign data against direct kernel quadrature, real and damped cases") {
        // S(t)(chi_+ - chi_-)(x) = int G(x-y,t) sign(y) dy
        auto oracle = [](double x, double t, const GLParams& p) {
            auto f_re = [&](double y) {
                return ((y > 0.0) ? 1.0 : -1.0) * semigroup::kernel_value(x - y, t, p).real();
            };
            auto f_im = [&](double y) {
                return ((y > 0.0) ? 1.0 : -1.0) * semigroup::kernel_value(x - y, t, p).imag();
            };
            const double R = std::abs(x) + 30.0 * std::sqrt(t / p.alpha);
            return complexd(oracles::integrate(f_re, -R, R, 1e-14),
                            oracles::integrate(f_im, -R, R, 1e-14));
        };
        const complexd got1 = semigroup::apply_to_step(1.0, -1.0, 1.0, 1.0, heat);
        CHECK(std::abs(got1 - oracle(1.0, 1.0, heat)) < 1e-11);
        CHECK(got1.real() == Catch::Approx(std::erf(0.5)).margin(1e-12));

        const complexd got2 = semigroup::apply_to_step(1.0, -1.0, 0.7, 0.4, mixed);
        CHECK(std::abs(got2 - oracle(0.7, 0.4, mixed)) < 1e-11);
    }

    SECTION("t -> 0 recovers the one-sided value") {
        const complexd ap(0.5, 0.5), am(-0.5, -0.5);
        CHECK(std::abs(semigroup::apply_to_step(ap, am, 0.3, 1e-8, mixed) - ap) < 1e-12);
        CHECK(std::abs(semigroup::apply_to_step(ap, am, -0.3, 1e-8, mixed) - am) < 1e-12);
    }

    SECTION("domain checks") {
        CHECK_THROWS_AS(semigroup::apply_to_step(1.0, 1.0, 0.0, 0.0, heat), std::domain_error);
        const GLParams nd = GLParams::from_alpha(1.0, 2);
        CHECK_THROWS_AS(semigroup::apply_to_step(1.0, 1.0, 0.0, 1.0, nd), std::invalid_argument);
    }
}

TEST_CASE("step gradient matches a finite difference of the closed form") {
    const GLParams p = GLParams::from_alpha(0.75);
    const complexd ap(0.2, 0.9), am(0.8, -0.3);
    for (double x : {-1.2, 0.5, 2.0}) {
        const double t = 0.6, h = 1e-5;
        const complexd fd = (semigroup::apply_to_step(ap, am, x + h, t, p) -
                             semigroup::apply_to_step(ap, am, x - h, t, p)) /
                            (2.0 * h);
        CHECK(std::abs(semigroup::step_gradient(ap, am, x, t, p) - fd) < 1e-9);
    }
}
