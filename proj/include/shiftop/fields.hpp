#pragma once

#include "shiftop/exprlang.hpp"
#include "shiftop/griddata.hpp"

#include <string>
#include <variant>

namespace shiftop {

/// A bounded real function of one real variable: either a parsed
/// expression evaluated exactly, or grid samples read through
/// interpolation. Immutable; evaluation is pure.
class ScalarField {
public:
    static ScalarField from_expression(std::string_view source, std::string label = {});
    static ScalarField from_expression(Expression expr, std::string label = {});
    static ScalarField constant(double value, std::string label = {});
    static ScalarField from_samples(GridFunction samples, InterpScheme scheme, std::string label = {});

    /// Value at x; domain errors from expression evaluation propagate.
    double operator()(double x) const;

    /// True when backed by an expression (exact pointwise evaluation, no
    /// grid involved) — required by the tree oracle and tangency check.
    bool expression_backed() const noexcept;
    const Expression* expression() const noexcept; // null when sample-backed

    const std::string& label() const noexcept { return label_; }

private:
    struct Samples {
        GridFunction fn;
        InterpScheme scheme;
    };

    ScalarField(std::variant<Expression, Samples> backing, std::string label)
        : backing_(std::move(backing)), label_(std::move(label)) {}

    std::variant<Expression, Samples> backing_;
    std::string label_;
};

/// Max of |f| over `samples` equispaced points of [lo, hi], both endpoints
/// included. A sampled stand-in for the sup norm: exact on the sample set,
/// so a lower bound on the true sup over the window.
double sup_norm_estimate(const ScalarField& f, double lo, double hi, int samples);

/// The (a, b, c) coefficient triple of u_t = a²u_xx + b u_x + c u, with a
/// cached bound on |c| over the working window.
struct CoefficientSet {
    ScalarField a, b, c;
    double c_sup = 0.0; // >= |c| at every grid node and dense window sample
};

/// Builds the set and estimates c_sup by dense sampling of the window,
/// refined so every grid node is itself sampled (the grid-level norm bound
/// check relies on that).
CoefficientSet make_coefficient_set(ScalarField a, ScalarField b, ScalarField c, const Grid& window);

} // namespace shiftop
