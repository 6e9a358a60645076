#pragma once

/**
 * A small expression language for Hamiltonians written in the sl(2) symbols
 *
 *     Jm = q.q,   Jp = p.p,   J3 = q.p
 *
 * and named real parameters. Any such expression is a function of the three
 * realized generators only, so it commutes with the universal integrals.
 *
 * Grammar (lowest to highest precedence):
 *
 *     expr     := term (('+' | '-') term)*
 *     term     := unary (('*' | '/') unary)*
 *     unary    := '-' unary | power
 *     power    := atom ('^' exponent)?
 *     exponent := '-'? INTEGER ('^' exponent)?      (right-associative, folded)
 *     atom     := NUMBER | IDENT | '(' expr ')'
 */

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <variant>
#include <vector>

#include "sl2/autodiff.hpp"
#include "sl2/errors.hpp"
#include "sl2/phase_space.hpp"

namespace sl2::expr {

/// Parameter bindings, e.g. {"omega": 1, "a": 1}. Ordered for deterministic output.
using ParamTable = std::map<std::string, double, std::less<>>;

struct SourceSpan {
    std::size_t offset = 0;
    std::size_t length = 0;
};

enum class SymbolKind { jminus, jplus, j3, param };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Number {
    double value;
};
struct Symbol {
    std::string name;
    SymbolKind kind;
};
struct Negate {
    NodePtr operand;
};
struct Binary {
    char op;  // one of + - * /
    NodePtr lhs;
    NodePtr rhs;
};
struct Power {
    NodePtr base;
    int exponent;
};

struct Node {
    std::variant<Number, Symbol, Negate, Binary, Power> data;
    SourceSpan span;
};

inline bool is_reserved(std::string_view name) { return name == "Jm" || name == "Jp" || name == "J3"; }

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(std::string_view src, std::size_t offset) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < offset && i < src.size(); ++i) {
        if (src[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
    Tok kind;
    std::string_view text;
    std::size_t offset;
    double number = 0.0;
};

class Parser {
public:
    template <class Declared>
    Parser(std::string_view src, const Declared& declared) : src_(src) {
        for (const auto& d : declared) declared_.emplace_back(d);
        advance();
    }

    NodePtr parse() {
        NodePtr e = parse_expr();
        if (tok_.kind != Tok::end) fail_syntax("unexpected '" + std::string(tok_.text) + "'", tok_.offset);
        return e;
    }

private:
    [[noreturn]] void fail(ParseError::Kind kind, const std::string& msg, std::size_t offset) const {
        const auto [line, column] = line_column(src_, offset);
        throw ParseError(kind, msg, line, column);
    }
    [[noreturn]] void fail_syntax(const std::string& msg, std::size_t offset) const {
        fail(ParseError::Kind::syntax, "syntax error: " + msg, offset);
    }

    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::size_t start = pos_;
        if (pos_ >= src_.size()) {
            tok_ = {Tok::end, {}, start};
            return;
        }
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            lex_number(start);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            tok_ = {Tok::ident, src_.substr(start, pos_ - start), start};
            return;
        }
        Tok kind;
        switch (c) {
            case '+': kind = Tok::plus; break;
            case '-': kind = Tok::minus; break;
            case '*': kind = Tok::star; break;
            case '/': kind = Tok::slash; break;
            case '^': kind = Tok::caret; break;
            case '(': kind = Tok::lparen; break;
            case ')': kind = Tok::rparen; break;
            default: fail_syntax("unexpected character '" + std::string(1, c) + "'", start);
        }
        ++pos_;
        tok_ = {kind, src_.substr(start, 1), start};
    }

    void lex_number(std::size_t start) {
        auto digits = [&] {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        };
        digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                digits();
            else
                pos_ = save;
        }
        const std::string_view text = src_.substr(start, pos_ - start);
        double value = 0.0;
        const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
        if (res.ec != std::errc() || res.ptr != text.data() + text.size())
            fail_syntax("malformed number '" + std::string(text) + "'", start);
        tok_ = {Tok::number, text, start, value};
    }

    static NodePtr make(decltype(Node::data) data, std::size_t begin, std::size_t end) {
        return std::make_shared<const Node>(Node{std::move(data), {begin, end - begin}});
    }
    static std::size_t end_of(const NodePtr& n) { return n->span.offset + n->span.length; }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        while (tok_.kind == Tok::plus || tok_.kind == Tok::minus) {
            const char op = tok_.kind == Tok::plus ? '+' : '-';
            advance();
            NodePtr rhs = parse_term();
            const std::size_t b = lhs->span.offset, e = end_of(rhs);
            lhs = make(Binary{op, std::move(lhs), std::move(rhs)}, b, e);
        }
        return lhs;
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        while (tok_.kind == Tok::star || tok_.kind == Tok::slash) {
            const char op = tok_.kind == Tok::star ? '*' : '/';
            advance();
            NodePtr rhs = parse_unary();
            const std::size_t b = lhs->span.offset, e = end_of(rhs);
            lhs = make(Binary{op, std::move(lhs), std::move(rhs)}, b, e);
        }
        return lhs;
    }

    NodePtr parse_unary() {
        if (tok_.kind == Tok::minus) {
            const std::size_t b = tok_.offset;
            advance();
            NodePtr operand = parse_unary();
            const std::size_t e = end_of(operand);
            return make(Negate{std::move(operand)}, b, e);
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (tok_.kind != Tok::caret) return base;
        advance();
        std::size_t end = 0;
        const int exponent = parse_exponent(end);
        const std::size_t b = base->span.offset;
        return make(Power{std::move(base), exponent}, b, end);
    }

    int parse_exponent(std::size_t& end) {
        bool negative = false;
        if (tok_.kind == Tok::minus) {
            negative = true;
            advance();
        }
        if (tok_.kind == Tok::end) fail_syntax("missing exponent", tok_.offset);
        if (tok_.kind != Tok::number) {
            if (tok_.kind == Tok::ident || tok_.kind == Tok::lparen)
                fail(ParseError::Kind::non_integer_exponent, "exponent must be an integer literal", tok_.offset);
            fail_syntax("unexpected '" + std::string(tok_.text) + "' in exponent", tok_.offset);
        }
        const double v = tok_.number;
        const bool integral = tok_.text.find_first_of(".eE") == std::string_view::npos;
        if (!integral || v > 1024.0)
            fail(ParseError::Kind::non_integer_exponent,
                 "exponent must be an integer literal of magnitude <= 1024, got '" + std::string(tok_.text) + "'",
                 tok_.offset);
        int e = static_cast<int>(v);
        end = tok_.offset + tok_.text.size();
        advance();
        if (tok_.kind == Tok::caret) {
            advance();
            const int rest = parse_exponent(end);
            double folded = std::pow(static_cast<double>(e), static_cast<double>(rest));
            if (std::abs(folded) > 1024.0 || folded != std::floor(folded))
                fail(ParseError::Kind::non_integer_exponent, "folded exponent is not a small integer", end);
            e = static_cast<int>(folded);
        }
        return negative ? -e : e;
    }

    NodePtr parse_atom() {
        const Token t = tok_;
        switch (t.kind) {
            case Tok::number:
                advance();
                return make(Number{t.number}, t.offset, t.offset + t.text.size());
            case Tok::ident: {
                advance();
                const std::string name(t.text);
                SymbolKind kind = SymbolKind::param;
                if (name == "Jm")
                    kind = SymbolKind::jminus;
                else if (name == "Jp")
                    kind = SymbolKind::jplus;
                else if (name == "J3")
                    kind = SymbolKind::j3;
                else if (!is_declared(name))
                    fail(ParseError::Kind::unknown_symbol, "unknown symbol '" + name + "'", t.offset);
                return make(Symbol{name, kind}, t.offset, t.offset + t.text.size());
            }
            case Tok::lparen: {
                advance();
                NodePtr inner = parse_expr();
                if (tok_.kind != Tok::rparen) {
                    if (tok_.kind == Tok::end) fail_syntax("missing ')'", tok_.offset);
                    fail_syntax("expected ')' but found '" + std::string(tok_.text) + "'", tok_.offset);
                }
                const std::size_t close_end = tok_.offset + 1;
                advance();
                return make(inner->data, t.offset, close_end);
            }
            case Tok::end: fail_syntax("unexpected end of input", t.offset);
            default: fail_syntax("unexpected '" + std::string(t.text) + "'", t.offset);
        }
    }

    bool is_declared(const std::string& name) const {
        for (const auto& d : declared_)
            if (d == name) return true;
        return false;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    Token tok_{Tok::end, {}, 0};
    std::vector<std::string> declared_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline int precedence(const Node& n) {
    if (const auto* b = std::get_if<Binary>(&n.data)) return (b->op == '+' || b->op == '-') ? 1 : 2;
    if (std::holds_alternative<Negate>(n.data)) return 3;
    if (std::holds_alternative<Power>(n.data)) return 4;
    if (const auto* num = std::get_if<Number>(&n.data); num && std::signbit(num->value)) return 3;
    return 5;
}

inline std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline void print(const Node& n, std::string& out) {
    auto child = [&out](const Node& c, bool parens) {
        if (parens) out += '(';
        print(c, out);
        if (parens) out += ')';
    };
    std::visit(
        [&](const auto& d) {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, Number>) {
                out += format_number(d.value);
            } else if constexpr (std::is_same_v<D, Symbol>) {
                out += d.name;
            } else if constexpr (std::is_same_v<D, Negate>) {
                out += '-';
                child(*d.operand, precedence(*d.operand) < 3);
            } else if constexpr (std::is_same_v<D, Binary>) {
                const int p = precedence(n);
                child(*d.lhs, precedence(*d.lhs) < p);
                if (p == 1) out += ' ';
                out += d.op;
                if (p == 1) out += ' ';
                // operators associate to the left, so an equal-precedence right operand keeps its parentheses
                child(*d.rhs, precedence(*d.rhs) <= p);
            } else {
                child(*d.base, precedence(*d.base) < 5);
                out += '^';
                out += std::to_string(d.exponent);
            }
        },
        n.data);
}

}  // namespace detail

/// Canonical text of an expression; reparsing it yields a structurally equal tree.
inline std::string to_string(const Node& n) {
    std::string out;
    detail::print(n, out);
    return out;
}

/// Structural equality, ignoring source spans.
inline bool structurally_equal(const Node& a, const Node& b) {
    if (a.data.index() != b.data.index()) return false;
    return std::visit(
        [&](const auto& da) -> bool {
            using D = std::decay_t<decltype(da)>;
            const auto& db = std::get<D>(b.data);
            if constexpr (std::is_same_v<D, Number>) {
                return da.value == db.value;
            } else if constexpr (std::is_same_v<D, Symbol>) {
                return da.name == db.name && da.kind == db.kind;
            } else if constexpr (std::is_same_v<D, Negate>) {
                return structurally_equal(*da.operand, *db.operand);
            } else if constexpr (std::is_same_v<D, Binary>) {
                return da.op == db.op && structurally_equal(*da.lhs, *db.lhs) &&
                       structurally_equal(*da.rhs, *db.rhs);
            } else {
                return da.exponent == db.exponent && structurally_equal(*da.base, *db.base);
            }
        },
        a.data);
}

// ---------------------------------------------------------------------------
// Parsed expression with its source

class Expression {
public:
    /// Parse `src`; every identifier other than Jm/Jp/J3 must appear in `declared`.
    template <class Declared = std::vector<std::string>>
    static Expression parse(std::string_view src, const Declared& declared = {}) {
        detail::Parser parser(src, declared);
        return Expression(std::string(src), parser.parse());
    }

    static Expression parse(std::string_view src, const ParamTable& params) {
        std::vector<std::string> names;
        for (const auto& [k, v] : params) names.push_back(k);
        return parse(src, names);
    }

    /// Wrap a tree built in code; its printed form becomes the source text.
    static Expression from_tree(NodePtr root) {
        expects(root != nullptr, "expression tree must be non-null");
        std::string src = expr::to_string(*root);
        return Expression(std::move(src), std::move(root));
    }

    const Node& root() const { return *root_; }
    const NodePtr& root_ptr() const { return root_; }
    const std::string& source() const { return source_; }
    std::string to_string() const { return expr::to_string(*root_); }

    /// Source text and 1-based column of a node's span, for diagnostics.
    std::string describe(const Node& n) const {
        const auto [line, column] = detail::line_column(source_, n.span.offset);
        std::string text = n.span.offset + n.span.length <= source_.size()
                               ? source_.substr(n.span.offset, n.span.length)
                               : expr::to_string(n);
        return "'" + text + "' (line " + std::to_string(line) + ", column " + std::to_string(column) + ")";
    }

private:
    Expression(std::string source, NodePtr root) : source_(std::move(source)), root_(std::move(root)) {}

    std::string source_;
    NodePtr root_;
};

/// Parse "name=value,name=value" into a parameter table.
inline ParamTable parse_params(std::string_view text) {
    ParamTable table;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        std::string_view item = text.substr(pos, comma - pos);
        pos = comma + 1;
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
        if (item.empty()) continue;
        const std::size_t eq = item.find('=');
        if (eq == std::string_view::npos) throw std::invalid_argument("parameter '" + std::string(item) + "' lacks '='");
        std::string name(item.substr(0, eq));
        std::string_view val = item.substr(eq + 1);
        while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
        while (!val.empty() && std::isspace(static_cast<unsigned char>(val.front()))) val.remove_prefix(1);
        double v = 0.0;
        const auto res = std::from_chars(val.data(), val.data() + val.size(), v);
        if (name.empty() || res.ec != std::errc() || res.ptr != val.data() + val.size() || !std::isfinite(v))
            throw std::invalid_argument("malformed parameter '" + std::string(item) + "'");
        if (is_reserved(name)) throw std::invalid_argument("parameter name '" + name + "' is reserved");
        if (!table.emplace(name, v).second) throw std::invalid_argument("duplicate parameter '" + name + "'");
    }
    return table;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

template <PhaseScalar T>
struct EvalContext {
    const Expression& expr;
    const ParamTable& params;
    SL2Functions<T> j;
    double guard;
};

template <PhaseScalar T>
T eval(const Node& n, const EvalContext<T>& ctx) {
    return std::visit(
        [&](const auto& d) -> T {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, Number>) {
                return constant_like(d.value, ctx.j.jminus);
            } else if constexpr (std::is_same_v<D, Symbol>) {
                switch (d.kind) {
                    case SymbolKind::jminus: return ctx.j.jminus;
                    case SymbolKind::jplus: return ctx.j.jplus;
                    case SymbolKind::j3: return ctx.j.j3;
                    case SymbolKind::param: break;
                }
                const auto it = ctx.params.find(d.name);
                if (it == ctx.params.end()) throw BindingError("unbound parameter '" + d.name + "'");
                return constant_like(it->second, ctx.j.jminus);
            } else if constexpr (std::is_same_v<D, Negate>) {
                return -eval(*d.operand, ctx);
            } else if constexpr (std::is_same_v<D, Binary>) {
                T lhs = eval(*d.lhs, ctx);
                T rhs = eval(*d.rhs, ctx);
                switch (d.op) {
                    case '+': return lhs + rhs;
                    case '-': return lhs - rhs;
                    case '*': return lhs * rhs;
                    default:
                        if (std::abs(value_of(rhs)) <= ctx.guard)
                            throw DomainError("division by zero in denominator " + ctx.expr.describe(*d.rhs));
                        return lhs / rhs;
                }
            } else {
                T base = eval(*d.base, ctx);
                if (d.exponent < 0 && std::abs(value_of(base)) <= ctx.guard)
                    throw DomainError("division by zero in negative power of " + ctx.expr.describe(*d.base));
                return pow_int(base, d.exponent);
            }
        },
        n.data);
}

}  // namespace detail

/// Evaluate at (q, p). Denominators with |value| <= guard raise DomainError
/// naming the offending subexpression; guard = 0 rejects only exact zeros.
template <PhaseScalar T>
T evaluate(const Expression& e, std::span<const T> q, std::span<const T> p, const ParamTable& params,
           double guard = 0.0) {
    const detail::EvalContext<T> ctx{e, params, sl2_functions(q, p), guard};
    return detail::eval(e.root(), ctx);
}

inline Jet eval_jet(const Expression& e, const PhaseState& s, const ParamTable& params) {
    const SeededState z = seed_all(s);
    return evaluate<Jet>(e, z.q, z.p, params);
}

inline double eval_value(const Expression& e, const PhaseState& s, const ParamTable& params) {
    return evaluate<double>(e, s.q(), s.p(), params);
}

inline Observable make_observable(const Expression& e, ParamTable params, std::string name = "H") {
    return Observable::generic(std::move(name), [e, params = std::move(params)](auto q, auto p) {
        using T = typename decltype(q)::value_type;
        return evaluate<std::remove_cv_t<T>>(e, q, p, params);
    });
}

}  // namespace sl2::expr
