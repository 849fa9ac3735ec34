#include "shiftop/chernoff.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace shiftop {

GridFunction apply_shift_operator(const GridFunction& f, double tau, const CoefficientSet& coeffs,
                                  InterpScheme scheme, ShiftStats* stats) {
    if (!(tau >= 0.0))
        throw std::invalid_argument("apply_shift_operator: tau must be nonnegative");
    if (tau == 0.0)
        return f;

    const Grid& g = f.grid();
    const double root_tau = std::sqrt(tau);
    std::vector<double> out(static_cast<std::size_t>(g.points));

    long long exits = 0;
    for (int i = 0; i < g.points; ++i) {
        const double x = g.node(i);
        const double ax = coeffs.a(x);
        const double bx = coeffs.b(x);
        const double cx = coeffs.c(x);
        const double xp = x + 2.0 * ax * root_tau;
        const double xm = x - 2.0 * ax * root_tau;
        const double xb = x + 2.0 * bx * tau;
        if (stats) {
            exits += (xp < g.x_min || xp > g.x_max);
            exits += (xm < g.x_min || xm > g.x_max);
            exits += (xb < g.x_min || xb > g.x_max);
        }
        out[static_cast<std::size_t>(i)] =
            0.25 * f.interpolate(xp, scheme) + 0.25 * f.interpolate(xm, scheme) +
            0.5 * f.interpolate(xb, scheme) + tau * cx * f.values()[static_cast<std::size_t>(i)];
    }
    if (stats) {
        stats->targets += 3LL * g.points;
        stats->exits += exits;
    }
    return GridFunction(g, std::move(out), f.extension());
}

SolveResult chernoff_solve(const GridFunction& u0, const ChernoffParams& params,
                           const CoefficientSet& coeffs) {
    if (!(params.t >= 0.0))
        throw std::invalid_argument("chernoff_solve: t must be nonnegative");
    if (params.n < 1)
        throw std::invalid_argument("chernoff_solve: n must be at least 1");
    const double tau = params.tau();
    if (params.t > 0.0 && tau < 1e-15)
        throw std::invalid_argument("chernoff_solve: step t/n underflows below 1e-15");

    SolveResult r{u0, 0, {}, {}};
    r.max_norm_history.reserve(static_cast<std::size_t>(params.n) + 1);
    r.max_norm_history.push_back(u0.max_norm());
    for (int k = 0; k < params.n; ++k) {
        r.u = apply_shift_operator(r.u, tau, coeffs, params.scheme, &r.shifts);
        r.max_norm_history.push_back(r.u.max_norm());
    }
    r.steps_applied = params.n;
    return r;
}

namespace {

// 4th-order first/second derivative stencils, numerators over 12h and 12h².
// Interior rows are centered; the first/last two nodes use the one-sided
// and offset-by-one variants.
struct StencilPair {
    double d1, d2;
};

StencilPair derivatives_at(const std::vector<double>& v, int i, int n, double h) {
    const double inv1 = 1.0 / (12.0 * h);
    const double inv2 = 1.0 / (12.0 * h * h);
    auto f = [&](int j) { return v[static_cast<std::size_t>(j)]; };
    if (i >= 2 && i <= n - 3) {
        const double d1 = (-f(i + 2) + 8.0 * f(i + 1) - 8.0 * f(i - 1) + f(i - 2)) * inv1;
        const double d2 =
            (-f(i + 2) + 16.0 * f(i + 1) - 30.0 * f(i) + 16.0 * f(i - 1) - f(i - 2)) * inv2;
        return {d1, d2};
    }
    if (i == 0) {
        const double d1 = (-25.0 * f(0) + 48.0 * f(1) - 36.0 * f(2) + 16.0 * f(3) - 3.0 * f(4)) * inv1;
        const double d2 = (45.0 * f(0) - 154.0 * f(1) + 214.0 * f(2) - 156.0 * f(3) + 61.0 * f(4) -
                           10.0 * f(5)) *
                          inv2;
        return {d1, d2};
    }
    if (i == 1) {
        const double d1 = (-3.0 * f(0) - 10.0 * f(1) + 18.0 * f(2) - 6.0 * f(3) + f(4)) * inv1;
        const double d2 =
            (10.0 * f(0) - 15.0 * f(1) - 4.0 * f(2) + 14.0 * f(3) - 6.0 * f(4) + f(5)) * inv2;
        return {d1, d2};
    }
    if (i == n - 1) {
        const double d1 = (25.0 * f(n - 1) - 48.0 * f(n - 2) + 36.0 * f(n - 3) - 16.0 * f(n - 4) +
                           3.0 * f(n - 5)) *
                          inv1;
        const double d2 = (45.0 * f(n - 1) - 154.0 * f(n - 2) + 214.0 * f(n - 3) -
                           156.0 * f(n - 4) + 61.0 * f(n - 5) - 10.0 * f(n - 6)) *
                          inv2;
        return {d1, d2};
    }
    // i == n - 2
    const double d1 =
        (3.0 * f(n - 1) + 10.0 * f(n - 2) - 18.0 * f(n - 3) + 6.0 * f(n - 4) - f(n - 5)) * inv1;
    const double d2 = (10.0 * f(n - 1) - 15.0 * f(n - 2) - 4.0 * f(n - 3) + 14.0 * f(n - 4) -
                       6.0 * f(n - 5) + f(n - 6)) *
                      inv2;
    return {d1, d2};
}

} // namespace

GridFunction apply_generator(const GridFunction& phi, const CoefficientSet& coeffs) {
    const Grid& g = phi.grid();
    if (g.points < 6)
        throw std::invalid_argument("apply_generator: needs at least 6 grid points");
    const double h = g.dx();
    std::vector<double> out(static_cast<std::size_t>(g.points));
    for (int i = 0; i < g.points; ++i) {
        const double x = g.node(i);
        const auto [d1, d2] = derivatives_at(phi.values(), i, g.points, h);
        const double ax = coeffs.a(x);
        out[static_cast<std::size_t>(i)] =
            ax * ax * d2 + coeffs.b(x) * d1 + coeffs.c(x) * phi.values()[static_cast<std::size_t>(i)];
    }
    return GridFunction(g, std::move(out), phi.extension());
}

GridFunction apply_generator(const ScalarField& phi, const CoefficientSet& coeffs, const Grid& grid) {
    if (!phi.expression_backed())
        throw std::invalid_argument("apply_generator: phi must be expression-backed");
    const double h = std::max(1e-4, grid.dx());
    const double inv1 = 1.0 / (12.0 * h);
    const double inv2 = 1.0 / (12.0 * h * h);
    std::vector<double> out(static_cast<std::size_t>(grid.points));
    for (int i = 0; i < grid.points; ++i) {
        const double x = grid.node(i);
        const double fm2 = phi(x - 2.0 * h);
        const double fm1 = phi(x - h);
        const double f0 = phi(x);
        const double fp1 = phi(x + h);
        const double fp2 = phi(x + 2.0 * h);
        const double d1 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) * inv1;
        const double d2 = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) * inv2;
        const double ax = coeffs.a(x);
        out[static_cast<std::size_t>(i)] = ax * ax * d2 + coeffs.b(x) * d1 + coeffs.c(x) * f0;
    }
    return GridFunction(grid, std::move(out), Extension::ConstantHold);
}

double tangency_residual(const ScalarField& phi, double tau, const CoefficientSet& coeffs,
                         const Grid& grid) {
    if (!(tau > 0.0))
        throw std::invalid_argument("tangency_residual: tau must be positive");
    if (!phi.expression_backed())
        throw std::invalid_argument("tangency_residual: phi must be expression-backed");

    const GridFunction h_phi = apply_generator(phi, coeffs, grid);
    const double root_tau = std::sqrt(tau);
    double worst = 0.0;
    for (int i = 1; i < grid.points - 1; ++i) {
        const double x = grid.node(i);
        const double ax = coeffs.a(x);
        const double bx = coeffs.b(x);
        const double cx = coeffs.c(x);
        const double fx = phi(x);
        const double s = 0.25 * phi(x + 2.0 * ax * root_tau) + 0.25 * phi(x - 2.0 * ax * root_tau) +
                         0.5 * phi(x + 2.0 * bx * tau) + tau * cx * fx;
        const double r =
            std::fabs(s - fx - tau * h_phi.values()[static_cast<std::size_t>(i)]) / tau;
        worst = std::max(worst, r);
    }
    return worst;
}

NormBoundCheck norm_bound_check(const GridFunction& f, double tau, const CoefficientSet& coeffs) {
    NormBoundCheck r;
    r.lhs = apply_shift_operator(f, tau, coeffs, InterpScheme::Linear).max_norm();
    r.rhs = (1.0 + coeffs.c_sup * tau) * f.max_norm();
    const double ulp = std::nextafter(r.rhs, std::numeric_limits<double>::infinity()) - r.rhs;
    r.holds = r.lhs <= r.rhs + 8.0 * ulp;
    return r;
}

} // namespace shiftop
