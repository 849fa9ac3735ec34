#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace shiftop {

/// Syntax error at a byte offset of the source text.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset);
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Evaluation produced a non-finite value (division by zero, sqrt of a
/// negative, overflow, ...). Carries the offending sub-expression text.
class EvalError : public std::runtime_error {
public:
    EvalError(const std::string& what, std::string subexpression);
    const std::string& subexpression() const noexcept { return sub_; }

private:
    std::string sub_;
};

enum class UnaryOp : std::uint8_t { Negate, Sin, Cos, Exp, Tanh, Sqrt, Abs };
enum class BinaryOp : std::uint8_t { Add, Sub, Mul, Div, Pow };

/// Immutable arithmetic expression in the single variable x.
///
/// Precedence, loosest to tightest: + -, * /, unary minus, ^ (right
/// associative), atoms. Atoms are decimal literals, x, pi, e, and
/// sin/cos/exp/tanh/sqrt/abs applied to a parenthesized argument.
class Expression {
public:
    /// Value at x under double semantics; children are evaluated before
    /// parents, left operand before right. Throws EvalError on the first
    /// non-finite intermediate. Pure: identical (tree, x) gives the
    /// identical bit pattern.
    double evaluate(double x) const;

    /// Canonical text with minimal parentheses; parsing it back yields a
    /// structurally identical tree.
    std::string to_string() const;

    bool same_structure(const Expression& other) const noexcept;

    /// Text this tree was parsed from (or synthesized for literals).
    const std::string& source() const noexcept { return source_; }

    /// A plain literal, for programmatically built constant fields.
    static Expression number(double value);

private:
    struct Node {
        enum class Kind : std::uint8_t { Number, Variable, Pi, Euler, Unary, Binary };
        Kind kind{};
        double value = 0.0;      // Number
        UnaryOp un{};            // Unary
        BinaryOp bin{};          // Binary
        std::int32_t lhs = -1;   // Unary child, Binary left
        std::int32_t rhs = -1;   // Binary right
        std::uint32_t begin = 0; // source span [begin, end)
        std::uint32_t end = 0;
    };

    friend class ExprParser;

    double eval_node(std::int32_t idx, double x) const;
    void print_node(std::int32_t idx, std::string& out) const;
    int node_precedence(std::int32_t idx) const noexcept;
    bool nodes_equal(std::int32_t i, const Expression& other, std::int32_t j) const noexcept;

    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
    std::string source_;
};

/// Parse source text; every failure throws ParseError carrying the byte
/// offset and what was expected there.
Expression parse_expression(std::string_view source);

} // namespace shiftop
