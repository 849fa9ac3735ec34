#pragma once

#include "shiftop/fields.hpp"
#include "shiftop/griddata.hpp"

namespace shiftop {

/// Cost guard for the exact recursive expansion (4^depth leaves).
struct TreeBudget {
    int max_depth = 12;
};

/// Exact value of the n-fold shift-operator composition at one point, by
/// literal recursive expansion of the four summands — no grid, no
/// interpolation. u0 and the coefficients must be expression-backed, so
/// the result is independent of any discretization choice. Branches are
/// combined in a fixed order; output is bit-reproducible.
double tree_evaluate(double x, double t, int n, const CoefficientSet& coeffs,
                     const ScalarField& u0, TreeBudget budget = {});

/// Heat solution for the fixed initial datum exp(-x²): u_t = D u_xx has
/// u(t, x) = (1 + 4Dt)^{-1/2} exp(-x² / (1 + 4Dt)).
double heat_analytic(double diffusivity, double t, double x);

/// Pure transport u_t = β u_x: u(t, x) = u0(x + βt).
double transport_analytic(const ScalarField& u0, double beta, double t, double x);

/// Pure reaction u_t = κ u: u(t, x) = e^{κt} u0(x).
double growth_analytic(const ScalarField& u0, double kappa, double t, double x);

/// Crank-Nicolson reference solver: θ = 1/2 stepping of
/// u_t = a²u_xx + b u_x + c u with 2nd-order central space differences on
/// u0's grid. Endpoint values stay fixed at u0's endpoint values; each
/// step solves the tridiagonal system by forward elimination and back
/// substitution. A vanishing pivot is reported with its step index.
GridFunction crank_nicolson(const GridFunction& u0, const CoefficientSet& coeffs, double t,
                            int steps);

} // namespace shiftop
