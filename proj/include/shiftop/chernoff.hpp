#pragma once

#include "shiftop/fields.hpp"
#include "shiftop/griddata.hpp"

#include <vector>

namespace shiftop {

/// Parameters of the product-formula evolution: total time t covered in n
/// equal compositions of step tau = t/n.
struct ChernoffParams {
    double t = 0.0;
    int n = 1;
    InterpScheme scheme = InterpScheme::Cubic;

    double tau() const noexcept { return t / n; }
};

/// Diagnostic counters: how many shift targets the step operator sent
/// outside the grid window (they are resolved by the extension policy,
/// but a large fraction means the window truncation is polluting results).
struct ShiftStats {
    long long targets = 0;
    long long exits = 0;

    double exit_fraction() const noexcept {
        return targets > 0 ? static_cast<double>(exits) / static_cast<double>(targets) : 0.0;
    }
};

/// One application of the shift operator
///
///   (S(tau)f)(x) = 1/4 f(x + 2a(x)sqrt(tau)) + 1/4 f(x - 2a(x)sqrt(tau))
///                + 1/2 f(x + 2b(x)tau) + tau c(x) f(x)
///
/// evaluated at every grid node; the shifted reads go through
/// interpolation, the tau c(x) f(x) term uses the node value directly.
/// tau = 0 short-circuits to the identity (returns f unchanged). The
/// result keeps f's grid and extension policy. Node values are computed
/// independently in a fixed expression order, so output is deterministic.
GridFunction apply_shift_operator(const GridFunction& f, double tau, const CoefficientSet& coeffs,
                                  InterpScheme scheme, ShiftStats* stats = nullptr);

struct SolveResult {
    GridFunction u;
    int steps_applied = 0;
    std::vector<double> max_norm_history; // n+1 entries, [0] = grid max norm of u0
    ShiftStats shifts;
};

/// The n-fold composition of the shift operator with step t/n applied to
/// u0. Rejects t/n below 1e-15 (step underflow) for t > 0.
SolveResult chernoff_solve(const GridFunction& u0, const ChernoffParams& params,
                           const CoefficientSet& coeffs);

/// The generator a(x)² φ'' + b(x) φ' + c(x) φ, with derivatives from
/// 4th-order finite differences at step h = dx; one-sided stencils in the
/// two cells at each boundary. Needs at least 6 grid points.
GridFunction apply_generator(const GridFunction& phi, const CoefficientSet& coeffs);

/// Same for an expression-backed φ: stencils stay centered (the
/// expression evaluates off-grid and beyond the window) with step
/// h = max(1e-4, dx).
GridFunction apply_generator(const ScalarField& phi, const CoefficientSet& coeffs, const Grid& grid);

/// max over interior grid nodes of |(S(tau)φ)(x) − φ(x) − tau (Hφ)(x)| / tau.
/// S(tau)φ is evaluated pointwise through the expression itself — no grid
/// values, no interpolation — so the number measures the operator, not the
/// discretization. φ must be expression-backed; tau must be positive.
double tangency_residual(const ScalarField& phi, double tau, const CoefficientSet& coeffs,
                         const Grid& grid);

struct NormBoundCheck {
    double lhs = 0.0;  // grid max norm of S(tau)f
    double rhs = 0.0;  // (1 + c_sup tau) * grid max norm of f
    bool holds = false; // lhs <= rhs + 8 ulps of rhs
};

/// Grid-level check of the bound ||S(t)f|| <= (1 + ||c|| t) ||f||. Runs
/// the step with the linear scheme, under which the bound holds exactly
/// in exact arithmetic (convex interpolation weights, clamping never
/// exceeds the max); 8 ulps of slack absorb rounding.
NormBoundCheck norm_bound_check(const GridFunction& f, double tau, const CoefficientSet& coeffs);

} // namespace shiftop
