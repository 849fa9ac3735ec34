#include "shiftop/fields.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace shiftop {

ScalarField ScalarField::from_expression(std::string_view source, std::string label) {
    Expression e = parse_expression(source);
    if (label.empty()) label.assign(source);
    return ScalarField(std::move(e), std::move(label));
}

ScalarField ScalarField::from_expression(Expression expr, std::string label) {
    if (label.empty()) label = expr.source();
    return ScalarField(std::move(expr), std::move(label));
}

ScalarField ScalarField::constant(double value, std::string label) {
    Expression e = Expression::number(value);
    if (label.empty()) label = e.source();
    return ScalarField(std::move(e), std::move(label));
}

ScalarField ScalarField::from_samples(GridFunction samples, InterpScheme scheme, std::string label) {
    if (label.empty()) label = "samples";
    return ScalarField(Samples{std::move(samples), scheme}, std::move(label));
}

double ScalarField::operator()(double x) const {
    if (const auto* e = std::get_if<Expression>(&backing_))
        return e->evaluate(x);
    const auto& s = std::get<Samples>(backing_);
    return s.fn.interpolate(x, s.scheme);
}

bool ScalarField::expression_backed() const noexcept {
    return std::holds_alternative<Expression>(backing_);
}

const Expression* ScalarField::expression() const noexcept {
    return std::get_if<Expression>(&backing_);
}

double sup_norm_estimate(const ScalarField& f, double lo, double hi, int samples) {
    if (!(lo < hi))
        throw std::invalid_argument("sup_norm_estimate: window must be non-degenerate");
    if (samples < 2)
        throw std::invalid_argument("sup_norm_estimate: needs at least 2 samples");
    const double step = (hi - lo) / (samples - 1);
    double m = 0.0;
    for (int j = 0; j < samples; ++j) {
        const double x = j == samples - 1 ? hi : lo + j * step;
        m = std::max(m, std::fabs(f(x)));
    }
    return m;
}

CoefficientSet make_coefficient_set(ScalarField a, ScalarField b, ScalarField c, const Grid& window) {
    const int dense = std::max(4 * (window.points - 1) + 1, 257);
    double c_sup = sup_norm_estimate(c, window.x_min, window.x_max, dense);
    for (int i = 0; i < window.points; ++i)
        c_sup = std::max(c_sup, std::fabs(c(window.node(i))));
    return CoefficientSet{std::move(a), std::move(b), std::move(c), c_sup};
}

} // namespace shiftop
