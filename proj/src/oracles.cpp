#include "shiftop/oracles.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace shiftop {

namespace {

struct TreeContext {
    const CoefficientSet& coeffs;
    const ScalarField& u0;
    double tau;
    double root_tau;
};

double tree_node(const TreeContext& ctx, double x, int k) {
    if (k == 0)
        return ctx.u0(x);
    const double ax = ctx.coeffs.a(x);
    const double bx = ctx.coeffs.b(x);
    const double cx = ctx.coeffs.c(x);
    return 0.25 * tree_node(ctx, x + 2.0 * ax * ctx.root_tau, k - 1) +
           0.25 * tree_node(ctx, x - 2.0 * ax * ctx.root_tau, k - 1) +
           0.5 * tree_node(ctx, x + 2.0 * bx * ctx.tau, k - 1) +
           ctx.tau * cx * tree_node(ctx, x, k - 1);
}

} // namespace

double tree_evaluate(double x, double t, int n, const CoefficientSet& coeffs,
                     const ScalarField& u0, TreeBudget budget) {
    if (n < 1)
        throw std::invalid_argument("tree_evaluate: n must be at least 1");
    if (n > budget.max_depth)
        throw std::invalid_argument("tree_evaluate: depth " + std::to_string(n) +
                                    " exceeds budget " + std::to_string(budget.max_depth));
    if (!(t >= 0.0))
        throw std::invalid_argument("tree_evaluate: t must be nonnegative");
    if (!u0.expression_backed() || !coeffs.a.expression_backed() ||
        !coeffs.b.expression_backed() || !coeffs.c.expression_backed())
        throw std::invalid_argument("tree_evaluate: u0 and coefficients must be expression-backed");

    const double tau = t / n;
    TreeContext ctx{coeffs, u0, tau, std::sqrt(tau)};
    return tree_node(ctx, x, n);
}

double heat_analytic(double diffusivity, double t, double x) {
    if (!(diffusivity > 0.0))
        throw std::invalid_argument("heat_analytic: diffusivity must be positive");
    if (!(t >= 0.0))
        throw std::invalid_argument("heat_analytic: t must be nonnegative");
    const double w = 1.0 + 4.0 * diffusivity * t;
    return std::exp(-x * x / w) / std::sqrt(w);
}

double transport_analytic(const ScalarField& u0, double beta, double t, double x) {
    return u0(x + beta * t);
}

double growth_analytic(const ScalarField& u0, double kappa, double t, double x) {
    return std::exp(kappa * t) * u0(x);
}

GridFunction crank_nicolson(const GridFunction& u0, const CoefficientSet& coeffs, double t,
                            int steps) {
    if (steps < 1)
        throw std::invalid_argument("crank_nicolson: steps must be at least 1");
    if (!(t >= 0.0))
        throw std::invalid_argument("crank_nicolson: t must be nonnegative");
    const Grid& g = u0.grid();
    if (g.points < 3)
        throw std::invalid_argument("crank_nicolson: needs at least 3 grid points");

    const int m = g.points - 2; // interior unknowns
    const double dx = g.dx();
    const double dt = t / steps;

    // spatial operator L u = a² u_xx + b u_x + c u as tridiagonal rows
    std::vector<double> lower(m), diag(m), upper(m);
    for (int i = 0; i < m; ++i) {
        const double x = g.node(i + 1);
        const double ax = coeffs.a(x);
        const double alpha = ax * ax / (dx * dx);
        const double beta = coeffs.b(x) / (2.0 * dx);
        lower[i] = alpha - beta;
        diag[i] = -2.0 * alpha + coeffs.c(x);
        upper[i] = alpha + beta;
    }

    // LHS matrix I - dt/2 L, constant across steps
    std::vector<double> a_lo(m), a_di(m), a_up(m);
    for (int i = 0; i < m; ++i) {
        a_lo[i] = -0.5 * dt * lower[i];
        a_di[i] = 1.0 - 0.5 * dt * diag[i];
        a_up[i] = -0.5 * dt * upper[i];
    }

    std::vector<double> v = u0.values();
    const double left = v.front();
    const double right = v.back();
    std::vector<double> rhs(m), cp(m), dp(m);

    for (int s = 0; s < steps; ++s) {
        for (int i = 0; i < m; ++i) {
            rhs[i] = v[i + 1] + 0.5 * dt * (lower[i] * v[i] + diag[i] * v[i + 1] + upper[i] * v[i + 2]);
        }
        // known boundary values of the next step move to the right side
        rhs[0] += 0.5 * dt * lower[0] * left;
        rhs[m - 1] += 0.5 * dt * upper[m - 1] * right;

        double pivot = a_di[0];
        if (pivot == 0.0)
            throw std::runtime_error("crank_nicolson: singular pivot at step " + std::to_string(s) +
                                     ", row 0 (dt/dx breakdown)");
        cp[0] = a_up[0] / pivot;
        dp[0] = rhs[0] / pivot;
        for (int i = 1; i < m; ++i) {
            pivot = a_di[i] - a_lo[i] * cp[i - 1];
            if (pivot == 0.0)
                throw std::runtime_error("crank_nicolson: singular pivot at step " +
                                         std::to_string(s) + ", row " + std::to_string(i) +
                                         " (dt/dx breakdown)");
            cp[i] = a_up[i] / pivot;
            dp[i] = (rhs[i] - a_lo[i] * dp[i - 1]) / pivot;
        }
        v[m] = dp[m - 1];
        for (int i = m - 2; i >= 0; --i)
            v[i + 1] = dp[i] - cp[i] * v[i + 2];
    }

    return GridFunction(g, std::move(v), u0.extension());
}

} // namespace shiftop
