#include "shiftop/oracles.hpp"

#include "shiftop/chernoff.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace shiftop;
using testutil::bit_equal;
using testutil::coeffs_from;

TEST_CASE("tree with n = 1 equals the step formula evaluated directly") {
    const Grid g(-4.0, 4.0, 65);
    const auto cs = coeffs_from("0.5+0.1*sin(x)", "0.2*cos(x)", "-0.1", g);
    const auto u0 = ScalarField::from_expression("exp(-x^2)");
    const double t = 0.3;
    const double rt = std::sqrt(t);
    for (double x : {-2.0, -0.5, 0.0, 1.25, 3.0}) {
        const double ax = cs.a(x);
        const double bx = cs.b(x);
        const double direct = 0.25 * u0(x + 2.0 * ax * rt) + 0.25 * u0(x - 2.0 * ax * rt) +
                              0.5 * u0(x + 2.0 * bx * t) + t * cs.c(x) * u0(x);
        CHECK(bit_equal(tree_evaluate(x, t, 1, cs, u0), direct));
    }
}

TEST_CASE("tree reproduces the scalar growth closed form") {
    const Grid g(-1.0, 1.0, 9);
    const auto cs = coeffs_from("0", "0", "0.8", g);
    const auto u0 = ScalarField::constant(1.0);
    const double v = tree_evaluate(0.3, 1.0, 4, cs, u0);
    const double expected = std::pow(1.0 + 0.8 / 4.0, 4);
    CHECK(std::fabs(v - expected) <= 1e-14 * expected);
}

TEST_CASE("tree adds 2 a^2 tau per level on quadratic data") {
    const Grid g(-1.0, 1.0, 9);
    const auto cs = coeffs_from("0.7", "0", "0", g);
    const auto u0 = ScalarField::from_expression("x^2");
    for (int n : {1, 2, 5, 8}) {
        for (double x : {-3.0, 0.3, 1.7}) {
            const double expected = x * x + 2.0 * 0.49 * 0.9;
            CHECK(tree_evaluate(x, 0.9, n, cs, u0) ==
                  doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("tree is grid-free and budget-guarded") {
    const auto u0 = ScalarField::from_expression("exp(-x^2)");
    // identical data described over different windows gives identical bits
    const auto cs1 = coeffs_from("0.5", "0.2", "-0.1", Grid(-4.0, 4.0, 65));
    const auto cs2 = coeffs_from("0.5", "0.2", "-0.1", Grid(-80.0, 80.0, 7));
    CHECK(bit_equal(tree_evaluate(0.7, 0.5, 5, cs1, u0), tree_evaluate(0.7, 0.5, 5, cs2, u0)));

    CHECK_THROWS_AS(tree_evaluate(0.0, 1.0, 13, cs1, u0), std::invalid_argument);
    CHECK_THROWS_AS(tree_evaluate(0.0, 1.0, 0, cs1, u0), std::invalid_argument);
    CHECK_THROWS_AS(tree_evaluate(0.0, 1.0, 3, cs1, u0, TreeBudget{2}), std::invalid_argument);

    const auto sampled = ScalarField::from_samples(
        sample(u0, Grid(-4.0, 4.0, 65), Extension::ConstantHold), InterpScheme::Cubic);
    CHECK_THROWS_AS(tree_evaluate(0.0, 1.0, 2, cs1, sampled), std::invalid_argument);
}

TEST_CASE("grid solve matches the tree expansion at probe points") {
    const Grid g(-8.0, 8.0, 2049);
    const auto cs = coeffs_from("0.5+0.1*sin(x)", "0.2*cos(x)", "-0.1", g);
    const auto u0f = ScalarField::from_expression("exp(-x^2)");
    const auto u0 = sample(u0f, g, Extension::ConstantHold);
    const auto r = chernoff_solve(u0, ChernoffParams{0.5, 3, InterpScheme::Cubic}, cs);
    for (double probe : {-1.0, 0.0, 1.0}) {
        const int i = static_cast<int>(std::lround((probe - g.x_min) / g.dx()));
        CHECK(std::fabs(r.u.values()[i] - tree_evaluate(g.node(i), 0.5, 3, cs, u0f)) <= 1e-6);
    }
}

TEST_CASE("heat kernel closed form") {
    CHECK(heat_analytic(0.25, 0.0, 1.3) == doctest::Approx(std::exp(-1.69)).epsilon(1e-15));
    CHECK(heat_analytic(0.25, 1.0, 0.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(heat_analytic(0.25, 1.0, 40.0) < 1e-300);
    CHECK_THROWS_AS(heat_analytic(0.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(heat_analytic(0.25, -1.0, 0.0), std::invalid_argument);
}

TEST_CASE("heat kernel agrees with direct quadrature of the convolution") {
    // Simpson rule over the Gaussian convolution; independent of the
    // closed form being checked
    auto quadrature = [](double d, double t, double x) {
        const int n = 4000; // even
        const double lo = -16.0, hi = 16.0;
        const double h = (hi - lo) / n;
        const double norm = 1.0 / std::sqrt(4.0 * std::numbers::pi * d * t);
        auto integrand = [&](double y) {
            return norm * std::exp(-(x - y) * (x - y) / (4.0 * d * t)) * std::exp(-y * y);
        };
        double acc = integrand(lo) + integrand(hi);
        for (int i = 1; i < n; ++i) acc += integrand(lo + i * h) * (i % 2 ? 4.0 : 2.0);
        return acc * h / 3.0;
    };
    const double cases[][3] = {{0.25, 1.0, 0.0}, {0.25, 1.0, 1.3}, {0.1, 0.5, -2.0},
                               {1.0, 2.0, 0.7}};
    for (const auto& k : cases) {
        CHECK(heat_analytic(k[0], k[1], k[2]) ==
              doctest::Approx(quadrature(k[0], k[1], k[2])).epsilon(1e-9));
    }
}

TEST_CASE("transport and growth closed forms") {
    const auto u0 = ScalarField::from_expression("exp(-x^2)");
    CHECK(bit_equal(transport_analytic(u0, 1.0, 0.0, 0.7), u0(0.7)));
    CHECK(bit_equal(transport_analytic(u0, 0.0, 5.0, 0.7), u0(0.7)));
    CHECK(transport_analytic(u0, 1.0, 0.5, -0.5) == 1.0);
    CHECK(bit_equal(growth_analytic(u0, 0.0, 2.0, 0.3), u0(0.3)));
    CHECK(bit_equal(growth_analytic(u0, 0.3, 0.0, 0.3), u0(0.3)));
    CHECK(growth_analytic(ScalarField::constant(1.0), 0.3, 1.0, 0.0) ==
          doctest::Approx(std::exp(0.3)).epsilon(1e-15));
}

TEST_CASE("crank-nicolson is the identity for zero coefficients") {
    std::mt19937 rng(211);
    const Grid g(-2.0, 2.0, 33);
    const auto cs = coeffs_from("0", "0", "0", g);
    const auto u0 = testutil::random_grid_function(g, Extension::ConstantHold, rng, 0.1, 1.0);
    const auto r = crank_nicolson(u0, cs, 1.0, 16);
    for (int i = 0; i < g.points; ++i)
        CHECK(bit_equal(r.values()[i], u0.values()[i]));
}

TEST_CASE("crank-nicolson scalar reaction matches the theta-scheme ratio") {
    const Grid g(-1.0, 1.0, 9);
    const auto cs = coeffs_from("0", "0", "0.4", g);
    const auto u0 = sample(ScalarField::constant(1.0), g, Extension::ConstantHold);
    const int steps = 8;
    const double dt = 1.0 / steps;
    const auto r = crank_nicolson(u0, cs, 1.0, steps);
    const double ratio = (1.0 + 0.4 * dt / 2.0) / (1.0 - 0.4 * dt / 2.0);
    const double expected = std::pow(ratio, steps);
    for (int i = 1; i < g.points - 1; ++i)
        CHECK(r.values()[i] == doctest::Approx(expected).epsilon(1e-12));
    // endpoints are pinned to the initial data
    CHECK(r.values().front() == 1.0);
    CHECK(r.values().back() == 1.0);
}

TEST_CASE("crank-nicolson heat accuracy and second-order self-convergence") {
    auto interior_error = [](int points, int steps) {
        const Grid g(-8.0, 8.0, points);
        const auto cs = coeffs_from("0.5", "0", "0", g);
        const auto u0 = sample(ScalarField::from_expression("exp(-x^2)"), g,
                               Extension::ConstantHold);
        const auto r = crank_nicolson(u0, cs, 1.0, steps);
        double err = 0.0;
        for (int i = 0; i < points; ++i) {
            const double x = g.node(i);
            if (x < -4.0 || x > 4.0) continue;
            err = std::max(err, std::fabs(r.values()[i] - heat_analytic(0.25, 1.0, x)));
        }
        return err;
    };
    const double coarse = interior_error(513, 512);   // dx = 1/32
    const double fine = interior_error(1025, 1024);   // dx = 1/64
    CHECK(coarse < 1e-4);
    CHECK(fine < 1e-4);
    CHECK(coarse / fine >= 3.0);
    CHECK(coarse / fine <= 5.0);
}

TEST_CASE("crank-nicolson self-convergence against a much finer run") {
    // power-of-two refinements share their coarse nodes bit-for-bit
    const auto run = [](int points, int steps) {
        const Grid g(-8.0, 8.0, points);
        const auto cs = coeffs_from("0.5", "0", "0", g);
        return crank_nicolson(sample(ScalarField::from_expression("exp(-x^2)"), g,
                                     Extension::ConstantHold),
                              cs, 1.0, steps);
    };
    const auto reference = run(4097, 4096); // dx = 1/256
    auto interior_error = [&](const GridFunction& u) {
        const int stride = (reference.grid().points - 1) / (u.grid().points - 1);
        double err = 0.0;
        for (int i = 0; i < u.grid().points; ++i) {
            const double x = u.grid().node(i);
            if (x < -4.0 || x > 4.0) continue;
            err = std::max(err, std::fabs(u.values()[i] - reference.values()[i * stride]));
        }
        return err;
    };
    const double coarse = interior_error(run(257, 256));  // dx = 1/16
    const double fine = interior_error(run(513, 512));    // dx = 1/32
    CHECK(coarse / fine >= 3.0);
    CHECK(coarse / fine <= 5.0);
}

TEST_CASE("oracle triangle on the heat scenario") {
    const Grid g(-8.0, 8.0, 1025);
    const auto cs = coeffs_from("0.5", "0", "0", g);
    const auto u0 = sample(ScalarField::from_expression("exp(-x^2)"), g, Extension::ConstantHold);
    const auto ch = chernoff_solve(u0, ChernoffParams{1.0, 1024, InterpScheme::Cubic}, cs);
    const auto cn = crank_nicolson(u0, cs, 1.0, 1024);

    double e_ch = 0.0, e_cn = 0.0, e_cross = 0.0;
    for (int i = 0; i < g.points; ++i) {
        const double x = g.node(i);
        if (x < -4.0 || x > 4.0) continue;
        const double exact = heat_analytic(0.25, 1.0, x);
        e_ch = std::max(e_ch, std::fabs(ch.u.values()[i] - exact));
        e_cn = std::max(e_cn, std::fabs(cn.values()[i] - exact));
        e_cross = std::max(e_cross, std::fabs(ch.u.values()[i] - cn.values()[i]));
    }
    CHECK(e_ch < 1e-2);
    CHECK(e_cn < 1e-4);
    CHECK(e_cross <= e_ch + e_cn);
}

TEST_CASE("crank-nicolson degenerate pivot is reported with its step") {
    const Grid g(-1.0, 1.0, 5);
    const auto cs = coeffs_from("0", "0", "2", g); // 1 - dt/2 * c = 0 at dt = 1
    const auto u0 = sample(ScalarField::constant(1.0), g, Extension::ConstantHold);
    try {
        (void)crank_nicolson(u0, cs, 1.0, 1);
        FAIL("expected singular pivot");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("step 0") != std::string::npos);
    }
    CHECK_THROWS_AS(crank_nicolson(u0, cs, 1.0, 0), std::invalid_argument);
}
