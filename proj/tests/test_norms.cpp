#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "llgflow/norms.hpp"
#include "llgflow/selfsim.hpp"
#include "oracles.hpp"

using namespace llgflow;

TEST_CASE("mean-oscillation estimator basics") {
    const Grid1D g = Grid1D::centered(4.0, 256);
    const std::vector<double> radii = norms::dyadic_radii(g);

    SECTION("constants give zero") {
        const ComplexField f = ComplexField::constant(g, complexd(2.3, -1.0));
        CHECK(norms::bmo_seminorm(f, radii) == Catch::Approx(0.0).margin(1e-13));
    }

    SECTION("vector step against the brute-force oscillation maximum") {
        const SpinField f = selfsim::step_data({1, 0, 0}, {0, 1, 0}, g);
        const double est = norms::bmo_seminorm(f, radii);
        const double brute = oracles::bmo_bruteforce(f.values);
        // a balanced window across the jump realizes |a-b|/2 exactly
        CHECK(brute == Catch::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-9));
        CHECK(est <= brute + 1e-12);
        // the center-anchored dyadic windows sit one node off balance
        CHECK(est == Catch::Approx(std::sqrt(2.0) / 2.0).epsilon(2e-4));
    }

    SECTION("shift and scale laws hold exactly") {
        std::mt19937_64 rng(41);
        const auto tf = oracles::random_trig_field(rng);
        const ComplexField f = ComplexField::sample(g, [&](double x) { return tf.value(x); });
        ComplexField shifted = f, scaled = f;
        for (auto& z : shifted.values) z += complexd(5.0, -2.0);
        for (auto& z : scaled.values) z *= -3.5;
        const double base = norms::bmo_seminorm(f, radii);
        CHECK(norms::bmo_seminorm(shifted, radii) == Catch::Approx(base).margin(1e-12));
        CHECK(norms::bmo_seminorm(scaled, radii) == Catch::Approx(3.5 * base).margin(1e-12));
    }

    SECTION("bounded by twice the sup norm") {
        std::mt19937_64 rng(43);
        for (int rep = 0; rep < 20; ++rep) {
            const auto tf = oracles::random_trig_field(rng);
            const ComplexField f = ComplexField::sample(g, [&](double x) { return tf.value(x); });
            CHECK(norms::bmo_seminorm(f, radii) <= 2.0 * f.sup_abs() + 1e-12);
        }
    }

    SECTION("empty window list is rejected") {
        const ComplexField f = ComplexField::constant(g, complexd(0.0));
        CHECK_THROWS_AS(norms::bmo_seminorm(f, {}), std::invalid_argument);
    }
}

TEST_CASE("double-average estimator and the sandwich") {
    const Grid1D g = Grid1D::centered(3.0, 192);
    const std::vector<double> radii = norms::dyadic_radii(g);

    SECTION("constant gives zero, step gives the jump size") {
        CHECK(norms::bmo_double_average(ComplexField::constant(g, complexd(1.0, 1.0)), radii) ==
              Catch::Approx(0.0).margin(1e-15));
        // two-sided step: worst double average approaches |a-b|/2 at the jump
        const SpinField f = selfsim::step_data({1, 0, 0}, {0, 1, 0}, g);
        const double da = norms::bmo_double_average(f, radii);
        CHECK(da == Catch::Approx(std::sqrt(2.0) / 2.0).epsilon(2e-2));
        CHECK(da <= oracles::double_average_bruteforce(f.values) + 1e-12);
    }

    SECTION("sandwich between one and two mean oscillations") {
        std::mt19937_64 rng(47);
        for (int rep = 0; rep < 10; ++rep) {
            const auto tf = oracles::random_trig_field(rng);
            const ComplexField f = ComplexField::sample(g, [&](double x) { return tf.value(x); });
            const double semi = norms::bmo_seminorm(f, radii);
            const double dbl = norms::bmo_double_average(f, radii);
            CHECK(semi <= dbl + 1e-8);
            CHECK(dbl <= 2.0 * semi + 1e-8);
        }
    }
}

TEST_CASE("X semi-norm on self-similar trajectories") {
    const double c = 0.3, alpha = 0.6;
    const selfsim::Profile prof = selfsim::build_profile(c, alpha, 1e-10);
    const Grid1D g = Grid1D::centered(16.0, 512);

    // geometric time ladder over [0.01, 10]
    std::vector<double> times;
    for (double t = 0.01; t <= 10.0 * (1.0 + 1e-12); t *= std::pow(10.0 / 0.01, 1.0 / 48.0))
        times.push_back(t);
    const SpinTrajectory tr = selfsim::sample_trajectory(prof, g, times);
    const norms::ParabolicBallSet balls = norms::ParabolicBallSet::dyadic(g);

    const norms::XSeminorm xs = norms::x_seminorm(tr, balls);

    SECTION("sup part equals the amplitude") {
        CHECK(xs.sup_part == Catch::Approx(c).epsilon(1e-6));
    }

    SECTION("total respects the 4c/alpha^(1/4) bound") {
        CHECK(xs.total() <= 4.0 * c / std::pow(alpha, 0.25));
    }

    SECTION("constant-in-space trajectory gives zero") {
        SpinTrajectory flat;
        flat.grid = g;
        flat.times = {0.5, 1.0, 2.0};
        flat.values.assign(3, std::vector<vec3>(g.n, vec3{0, 0, 1}));
        flat.gradients.assign(3, std::vector<vec3>(g.n, vec3{0, 0, 0}));
        CHECK(norms::x_seminorm(flat, balls).total() == Catch::Approx(0.0).margin(1e-15));
    }

    SECTION("missing gradients are rejected") {
        SpinTrajectory nog = tr;
        nog.gradients.clear();
        CHECK_THROWS_AS(norms::x_seminorm(nog, balls), std::invalid_argument);
    }

    SECTION("invariance under the parabolic rescaling") {
        const double lambda = 3.0;
        Grid1D g2 = g;
        g2.origin /= lambda;
        g2.spacing /= lambda;
        SpinTrajectory scaled;
        scaled.grid = g2;
        for (double t : times) scaled.times.push_back(t / (lambda * lambda));
        scaled.values = tr.values;
        scaled.gradients.resize(tr.gradients.size());
        for (std::size_t k = 0; k < tr.gradients.size(); ++k) {
            scaled.gradients[k].resize(g.n);
            for (std::size_t i = 0; i < g.n; ++i)
                scaled.gradients[k][i] = lambda * tr.gradients[k][i];
        }
        norms::ParabolicBallSet b2;
        for (double xc : balls.centers) b2.centers.push_back(xc / lambda);
        for (double r : balls.radii) b2.radii.push_back(r / lambda);
        const norms::XSeminorm xs2 = norms::x_seminorm(scaled, b2);
        CHECK(xs2.total() == Catch::Approx(xs.total()).margin(1e-6));
    }
}

TEST_CASE("Y norm") {
    const Grid1D g = Grid1D::centered(8.0, 256);
    const norms::ParabolicBallSet balls = norms::ParabolicBallSet::dyadic(g);

    SECTION("zero trajectory") {
        ComplexTrajectory z;
        z.grid = g;
        z.times = {0.1, 0.5, 1.0};
        z.values.assign(3, std::vector<complexd>(g.n, complexd(0.0)));
        CHECK(norms::y_norm(z, balls) == Catch::Approx(0.0).margin(1e-15));
    }

    SECTION("v = 1/t makes the weighted sup exactly one") {
        ComplexTrajectory tr;
        tr.grid = g;
        for (double t = 0.2; t <= 2.0 + 1e-12; t += 0.2) {
            tr.times.push_back(t);
            tr.values.emplace_back(g.n, complexd(1.0 / t, 0.0));
        }
        const double y = norms::y_norm(tr, balls);
        // sup_t t * (1/t) = 1 plus the ball part of a space-constant field
        CHECK(y >= 1.0);
        ComplexTrajectory sup_only = tr;
        norms::ParabolicBallSet tiny;
        tiny.centers = {0.0};
        tiny.radii = {g.spacing * 4.0};
        const double y2 = norms::y_norm(sup_only, tiny);
        CHECK(y2 == Catch::Approx(1.0).margin(0.11));  // small-ball part is O(r)
    }

    SECTION("squared-gradient trajectory obeys the g-to-X comparison") {
        const double c = 0.25, alpha = 0.7;
        const selfsim::Profile prof = selfsim::build_profile(c, alpha, 1e-10);
        std::vector<double> times;
        for (double t = 0.05; t <= 5.0 + 1e-12; t *= 1.35) times.push_back(t);
        const SpinTrajectory m = selfsim::sample_trajectory(prof, Grid1D::centered(12.0, 384), times);

        ComplexTrajectory gsq;
        gsq.grid = m.grid;
        gsq.times = times;
        gsq.values.resize(times.size());
        for (std::size_t k = 0; k < times.size(); ++k) {
            gsq.values[k].resize(m.grid.n);
            for (std::size_t i = 0; i < m.grid.n; ++i)
                gsq.values[k][i] = complexd(sq(norm(m.gradients[k][i])), 0.0);
        }
        const norms::ParabolicBallSet b = norms::ParabolicBallSet::dyadic(m.grid);
        CHECK(norms::y_norm(gsq, b) <= sq(norms::x_seminorm(m, b).total()) + 1e-12);
    }
}

TEST_CASE("Carleson closed form for the self-similar gradient") {
    SECTION("zero amplitude and domain errors") {
        CHECK(norms::carleson_selfsim(0.0, 0.5, 1.0, 2.0) == 0.0);
        CHECK_THROWS_AS(norms::carleson_selfsim(1.0, 0.5, 0.0, -1.0), std::domain_error);
        CHECK_THROWS_AS(norms::carleson_selfsim(1.0, 0.5, 0.0, 0.0), std::domain_error);
    }

    SECTION("canonical value against direct quadrature of E1(z^2)") {
        // sqrt(2) int_{-1/sqrt2}^{1/sqrt2} E1(z^2) dz at c = alpha = r = 1, x = 0
        const double inner = oracles::integrate_graded_at_zero(
            [](double z) { return special::e1(z * z); }, 1.0 / std::sqrt(2.0));
        const double expect = std::sqrt(2.0) * 2.0 * inner;
        CHECK(norms::carleson_selfsim(1.0, 1.0, 0.0, 1.0) == Catch::Approx(expect).epsilon(1e-10));
    }

    SECTION("uniform bound and brute-force space-time quadrature on a grid") {
        for (double c : {0.2, 0.7, 1.3}) {
            for (double alpha : {0.4, 0.75, 1.0}) {
                for (double x : {0.0, 0.8, 2.5}) {
                    for (double r : {0.5, 1.0, 3.0}) {
                        const double val = norms::carleson_selfsim(c, alpha, x, r);
                        CHECK(val <= norms::carleson_selfsim_bound(c, alpha) + 1e-12);
                        const double brute = oracles::carleson_bruteforce(c, alpha, x, r);
                        CHECK(val == Catch::Approx(brute).margin(1e-6));
                    }
                }
            }
        }
    }

    SECTION("exponential-integral identity: int_0^inf E1(y^2) dy = sqrt(pi)") {
        double total = oracles::integrate_graded_at_zero(
            [](double z) { return special::e1(z * z); }, 1.0);
        total += oracles::integrate([](double z) { return special::e1(z * z); }, 1.0, 9.0, 1e-14);
        CHECK(total == Catch::Approx(sqrt_pi).margin(1e-8));
    }
}
