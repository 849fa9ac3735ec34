#include "shiftop/exprlang.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

namespace shiftop {

ParseError::ParseError(const std::string& what, std::size_t offset)
    : std::runtime_error(what + " (offset " + std::to_string(offset) + ")"), offset_(offset) {}

EvalError::EvalError(const std::string& what, std::string subexpression)
    : std::runtime_error(what + " in '" + subexpression + "'"), sub_(std::move(subexpression)) {}

namespace {

enum class Tok : std::uint8_t { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    double value = 0.0;         // Number
    std::string_view text;      // Ident
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
};

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < src.size()) {
        const char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++i;
            continue;
        }
        const auto begin = static_cast<std::uint32_t>(i);
        if (c >= '0' && c <= '9') {
            double v = 0.0;
            const char* first = src.data() + i;
            const char* last = src.data() + src.size();
            auto [ptr, ec] = std::from_chars(first, last, v);
            if (ec == std::errc::result_out_of_range)
                throw ParseError("number literal out of range", i);
            if (ec != std::errc())
                throw ParseError("malformed number literal", i);
            i += static_cast<std::size_t>(ptr - first);
            out.push_back({Tok::Number, v, {}, begin, static_cast<std::uint32_t>(i)});
            continue;
        }
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
            std::size_t j = i + 1;
            while (j < src.size() &&
                   ((src[j] >= 'a' && src[j] <= 'z') || (src[j] >= 'A' && src[j] <= 'Z') ||
                    (src[j] >= '0' && src[j] <= '9') || src[j] == '_'))
                ++j;
            out.push_back({Tok::Ident, 0.0, src.substr(i, j - i), begin, static_cast<std::uint32_t>(j)});
            i = j;
            continue;
        }
        Tok k;
        switch (c) {
            case '+': k = Tok::Plus; break;
            case '-': k = Tok::Minus; break;
            case '*': k = Tok::Star; break;
            case '/': k = Tok::Slash; break;
            case '^': k = Tok::Caret; break;
            case '(': k = Tok::LParen; break;
            case ')': k = Tok::RParen; break;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", i);
        }
        ++i;
        out.push_back({k, 0.0, {}, begin, static_cast<std::uint32_t>(i)});
    }
    out.push_back({Tok::End, 0.0, {}, static_cast<std::uint32_t>(src.size()),
                   static_cast<std::uint32_t>(src.size())});
    return out;
}

} // namespace

class ExprParser {
public:
    explicit ExprParser(std::string_view src) : tokens_(tokenize(src)) {
        expr_.source_.assign(src);
    }

    Expression parse() {
        if (tokens_.front().kind == Tok::End)
            throw ParseError("expected an expression", 0);
        expr_.root_ = parse_sum();
        const Token& t = peek();
        if (t.kind != Tok::End)
            throw ParseError("expected an operator or end of input", t.begin);
        return std::move(expr_);
    }

private:
    using Node = Expression::Node;

    const Token& peek() const { return tokens_[pos_]; }
    const Token& advance() { return tokens_[pos_++]; }
    bool accept(Tok k) {
        if (peek().kind == k) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::int32_t add(Node n) {
        expr_.nodes_.push_back(n);
        return static_cast<std::int32_t>(expr_.nodes_.size() - 1);
    }

    std::int32_t add_binary(BinaryOp op, std::int32_t l, std::int32_t r) {
        Node n;
        n.kind = Node::Kind::Binary;
        n.bin = op;
        n.lhs = l;
        n.rhs = r;
        n.begin = expr_.nodes_[l].begin;
        n.end = expr_.nodes_[r].end;
        return add(n);
    }

    std::int32_t parse_sum() {
        std::int32_t l = parse_product();
        for (;;) {
            if (accept(Tok::Plus))
                l = add_binary(BinaryOp::Add, l, parse_product());
            else if (accept(Tok::Minus))
                l = add_binary(BinaryOp::Sub, l, parse_product());
            else
                return l;
        }
    }

    std::int32_t parse_product() {
        std::int32_t l = parse_factor();
        for (;;) {
            if (accept(Tok::Star))
                l = add_binary(BinaryOp::Mul, l, parse_factor());
            else if (accept(Tok::Slash))
                l = add_binary(BinaryOp::Div, l, parse_factor());
            else
                return l;
        }
    }

    // unary minus sits between * / and ^, so -x^2 is -(x^2) and 2^-3 parses
    std::int32_t parse_factor() {
        const Token& t = peek();
        if (accept(Tok::Minus)) {
            std::int32_t c = parse_factor();
            Node n;
            n.kind = Node::Kind::Unary;
            n.un = UnaryOp::Negate;
            n.lhs = c;
            n.begin = t.begin;
            n.end = expr_.nodes_[c].end;
            return add(n);
        }
        return parse_power();
    }

    std::int32_t parse_power() {
        std::int32_t base = parse_atom();
        if (accept(Tok::Caret))
            return add_binary(BinaryOp::Pow, base, parse_factor()); // right associative
        return base;
    }

    std::int32_t parse_atom() {
        const Token& t = advance();
        Node n;
        n.begin = t.begin;
        n.end = t.end;
        switch (t.kind) {
            case Tok::Number:
                n.kind = Node::Kind::Number;
                n.value = t.value;
                return add(n);
            case Tok::LParen: {
                std::int32_t inner = parse_sum();
                const Token& close = peek();
                if (!accept(Tok::RParen))
                    throw ParseError("expected ')'", close.begin);
                // widen the span over the parens so diagnostics stay balanced
                expr_.nodes_[static_cast<std::size_t>(inner)].begin = t.begin;
                expr_.nodes_[static_cast<std::size_t>(inner)].end = close.end;
                return inner;
            }
            case Tok::Ident:
                return parse_ident(t);
            default:
                throw ParseError("expected a number, 'x', a constant, a function call, or '('", t.begin);
        }
    }

    std::int32_t parse_ident(const Token& t) {
        Node n;
        n.begin = t.begin;
        n.end = t.end;
        if (t.text == "x") {
            n.kind = Node::Kind::Variable;
            return add(n);
        }
        if (t.text == "pi") {
            n.kind = Node::Kind::Pi;
            return add(n);
        }
        if (t.text == "e") {
            n.kind = Node::Kind::Euler;
            return add(n);
        }
        UnaryOp fn;
        if (t.text == "sin") fn = UnaryOp::Sin;
        else if (t.text == "cos") fn = UnaryOp::Cos;
        else if (t.text == "exp") fn = UnaryOp::Exp;
        else if (t.text == "tanh") fn = UnaryOp::Tanh;
        else if (t.text == "sqrt") fn = UnaryOp::Sqrt;
        else if (t.text == "abs") fn = UnaryOp::Abs;
        else
            throw ParseError("unknown identifier '" + std::string(t.text) + "'", t.begin);

        const Token& open = peek();
        if (!accept(Tok::LParen))
            throw ParseError("expected '(' after function name '" + std::string(t.text) + "'", open.begin);
        std::int32_t arg = parse_sum();
        const Token& close = peek();
        if (!accept(Tok::RParen))
            throw ParseError("expected ')'", close.begin);
        n.kind = Node::Kind::Unary;
        n.un = fn;
        n.lhs = arg;
        n.end = close.end;
        return add(n);
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    Expression expr_;
};

Expression parse_expression(std::string_view source) {
    return ExprParser(source).parse();
}

Expression Expression::number(double value) {
    Expression e;
    Node n;
    n.kind = Node::Kind::Number;
    n.value = value;
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    (void)ec;
    e.source_.assign(buf, ptr);
    n.begin = 0;
    n.end = static_cast<std::uint32_t>(e.source_.size());
    e.nodes_.push_back(n);
    e.root_ = 0;
    return e;
}

double Expression::evaluate(double x) const {
    if (!std::isfinite(x))
        throw std::invalid_argument("Expression::evaluate: x must be finite");
    return eval_node(root_, x);
}

double Expression::eval_node(std::int32_t idx, double x) const {
    const Node& n = nodes_[static_cast<std::size_t>(idx)];
    double v = 0.0;
    switch (n.kind) {
        case Node::Kind::Number: v = n.value; break;
        case Node::Kind::Variable: v = x; break;
        case Node::Kind::Pi: v = std::numbers::pi; break;
        case Node::Kind::Euler: v = std::numbers::e; break;
        case Node::Kind::Unary: {
            const double c = eval_node(n.lhs, x);
            switch (n.un) {
                case UnaryOp::Negate: v = -c; break;
                case UnaryOp::Sin: v = std::sin(c); break;
                case UnaryOp::Cos: v = std::cos(c); break;
                case UnaryOp::Exp: v = std::exp(c); break;
                case UnaryOp::Tanh: v = std::tanh(c); break;
                case UnaryOp::Sqrt: v = std::sqrt(c); break;
                case UnaryOp::Abs: v = std::fabs(c); break;
            }
            break;
        }
        case Node::Kind::Binary: {
            const double l = eval_node(n.lhs, x);
            const double r = eval_node(n.rhs, x);
            switch (n.bin) {
                case BinaryOp::Add: v = l + r; break;
                case BinaryOp::Sub: v = l - r; break;
                case BinaryOp::Mul: v = l * r; break;
                case BinaryOp::Div: v = l / r; break;
                case BinaryOp::Pow: v = std::pow(l, r); break;
            }
            break;
        }
    }
    if (!std::isfinite(v))
        throw EvalError("domain error: non-finite value", source_.substr(n.begin, n.end - n.begin));
    return v;
}

namespace {
// + - are level 1, * / level 2, unary minus 3, ^ 4, atoms 5
int op_precedence(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return 1;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 2;
        case BinaryOp::Pow: return 4;
    }
    return 5;
}

const char* fn_name(UnaryOp fn) {
    switch (fn) {
        case UnaryOp::Sin: return "sin";
        case UnaryOp::Cos: return "cos";
        case UnaryOp::Exp: return "exp";
        case UnaryOp::Tanh: return "tanh";
        case UnaryOp::Sqrt: return "sqrt";
        case UnaryOp::Abs: return "abs";
        case UnaryOp::Negate: return "-";
    }
    return "?";
}
} // namespace

int Expression::node_precedence(std::int32_t idx) const noexcept {
    const Node& n = nodes_[static_cast<std::size_t>(idx)];
    if (n.kind == Node::Kind::Binary) return op_precedence(n.bin);
    if (n.kind == Node::Kind::Unary && n.un == UnaryOp::Negate) return 3;
    return 5;
}

void Expression::print_node(std::int32_t idx, std::string& out) const {
    const Node& n = nodes_[static_cast<std::size_t>(idx)];
    auto child = [&](std::int32_t c, bool parens) {
        if (parens) out += '(';
        print_node(c, out);
        if (parens) out += ')';
    };
    switch (n.kind) {
        case Node::Kind::Number: {
            char buf[32];
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, n.value);
            (void)ec;
            out.append(buf, ptr);
            return;
        }
        case Node::Kind::Variable: out += 'x'; return;
        case Node::Kind::Pi: out += "pi"; return;
        case Node::Kind::Euler: out += 'e'; return;
        case Node::Kind::Unary:
            if (n.un == UnaryOp::Negate) {
                out += '-';
                child(n.lhs, node_precedence(n.lhs) < 3);
            } else {
                out += fn_name(n.un);
                out += '(';
                print_node(n.lhs, out);
                out += ')';
            }
            return;
        case Node::Kind::Binary: {
            const int p = op_precedence(n.bin);
            const char* sym = n.bin == BinaryOp::Add ? "+"
                            : n.bin == BinaryOp::Sub ? "-"
                            : n.bin == BinaryOp::Mul ? "*"
                            : n.bin == BinaryOp::Div ? "/"
                                                     : "^";
            if (n.bin == BinaryOp::Pow) {
                // right associative; the exponent slot accepts unary minus
                child(n.lhs, node_precedence(n.lhs) <= p);
                out += sym;
                child(n.rhs, node_precedence(n.rhs) < 3);
            } else {
                child(n.lhs, node_precedence(n.lhs) < p);
                out += sym;
                child(n.rhs, node_precedence(n.rhs) <= p);
            }
            return;
        }
    }
}

std::string Expression::to_string() const {
    std::string out;
    print_node(root_, out);
    return out;
}

bool Expression::nodes_equal(std::int32_t i, const Expression& other, std::int32_t j) const noexcept {
    const Node& a = nodes_[static_cast<std::size_t>(i)];
    const Node& b = other.nodes_[static_cast<std::size_t>(j)];
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Node::Kind::Number: return a.value == b.value;
        case Node::Kind::Variable:
        case Node::Kind::Pi:
        case Node::Kind::Euler: return true;
        case Node::Kind::Unary:
            return a.un == b.un && nodes_equal(a.lhs, other, b.lhs);
        case Node::Kind::Binary:
            return a.bin == b.bin && nodes_equal(a.lhs, other, b.lhs) &&
                   nodes_equal(a.rhs, other, b.rhs);
    }
    return false;
}

bool Expression::same_structure(const Expression& other) const noexcept {
    if (root_ < 0 || other.root_ < 0) return root_ == other.root_;
    return nodes_equal(root_, other, other.root_);
}

} // namespace shiftop
