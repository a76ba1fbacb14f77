#pragma once

#include <charconv>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "wpdi/errors.hpp"
#include "wpdi/jet.hpp"

namespace wpdi {

/// f-mode: functions of (x, y), with z accepted as sugar for y * x^(-3/2).
/// h-mode: univariate profiles of z only.
enum class ExprMode { FunctionXY, ProfileZ };

enum class VarKind { X, Y, Z };
enum class UnaryOp { Neg, Sqrt, Exp, Log };
enum class BinaryOp { Add, Sub, Mul, Div };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct NumberNode {
    double value;
};
struct VarNode {
    VarKind var;
};
struct UnaryNode {
    UnaryOp op;
    ExprPtr operand;
};
struct BinaryNode {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};
/// '^' with its right operand already folded to a number at parse time.
struct PowNode {
    ExprPtr base;
    double exponent;
};

struct Expr {
    std::variant<NumberNode, VarNode, UnaryNode, BinaryNode, PowNode> node;
};

struct ExprAst {
    ExprPtr root;
    ExprMode mode = ExprMode::FunctionXY;
};

namespace detail {

struct Token {
    enum class Kind { Number, Var, Func, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
    Kind kind;
    std::size_t offset;
    double number = 0.0;
    VarKind var = VarKind::X;
    UnaryOp func = UnaryOp::Sqrt;
};

class Lexer {
public:
    Lexer(std::string_view src, ExprMode mode) : src_(src), mode_(mode) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) ++pos_;
        tok_.offset = pos_;
        if (pos_ >= src_.size()) {
            tok_.kind = Token::Kind::End;
            return;
        }
        const char c = src_[pos_];
        switch (c) {
            case '+': tok_.kind = Token::Kind::Plus; ++pos_; return;
            case '-': tok_.kind = Token::Kind::Minus; ++pos_; return;
            case '*': tok_.kind = Token::Kind::Star; ++pos_; return;
            case '/': tok_.kind = Token::Kind::Slash; ++pos_; return;
            case '^': tok_.kind = Token::Kind::Caret; ++pos_; return;
            case '(': tok_.kind = Token::Kind::LParen; ++pos_; return;
            case ')': tok_.kind = Token::Kind::RParen; ++pos_; return;
            default: break;
        }
        if (c >= '0' && c <= '9') {
            lex_number();
            return;
        }
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
            lex_word();
            return;
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
    }

    void lex_number() {
        std::size_t end = pos_;
        while (end < src_.size() && src_[end] >= '0' && src_[end] <= '9') ++end;
        if (end < src_.size() && src_[end] == '.') {
            ++end;
            while (end < src_.size() && src_[end] >= '0' && src_[end] <= '9') ++end;
        }
        if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
            std::size_t e = end + 1;
            if (e < src_.size() && (src_[e] == '+' || src_[e] == '-')) ++e;
            std::size_t digits = e;
            while (digits < src_.size() && src_[digits] >= '0' && src_[digits] <= '9') ++digits;
            if (digits > e) end = digits;
        }
        double value = 0.0;
        const auto res = std::from_chars(src_.data() + pos_, src_.data() + end, value);
        if (res.ec != std::errc{} || res.ptr != src_.data() + end) {
            throw SyntaxError("malformed number literal", pos_);
        }
        tok_.kind = Token::Kind::Number;
        tok_.number = value;
        pos_ = end;
    }

    void lex_word() {
        std::size_t end = pos_;
        while (end < src_.size() &&
               ((src_[end] >= 'a' && src_[end] <= 'z') || (src_[end] >= 'A' && src_[end] <= 'Z'))) {
            ++end;
        }
        const std::string_view word = src_.substr(pos_, end - pos_);
        if (word == "sqrt" || word == "exp" || word == "log") {
            tok_.kind = Token::Kind::Func;
            tok_.func = word == "sqrt" ? UnaryOp::Sqrt : word == "exp" ? UnaryOp::Exp : UnaryOp::Log;
        } else if (word == "x" || word == "y" || word == "z") {
            if (mode_ == ExprMode::ProfileZ && word != "z") {
                throw ModeError("variable '" + std::string(word) + "' not allowed in h-mode", pos_);
            }
            tok_.kind = Token::Kind::Var;
            tok_.var = word == "x" ? VarKind::X : word == "y" ? VarKind::Y : VarKind::Z;
        } else {
            throw SyntaxError("unknown identifier '" + std::string(word) + "'", pos_);
        }
        pos_ = end;
    }

    std::string_view src_;
    ExprMode mode_;
    std::size_t pos_ = 0;
    Token tok_{};
};

inline std::optional<double> fold_constant(const ExprPtr& e) {
    if (const auto* n = std::get_if<NumberNode>(&e->node)) return n->value;
    if (const auto* u = std::get_if<UnaryNode>(&e->node)) {
        const auto inner = fold_constant(u->operand);
        if (!inner) return std::nullopt;
        switch (u->op) {
            case UnaryOp::Neg: return -*inner;
            case UnaryOp::Sqrt: return std::sqrt(*inner);
            case UnaryOp::Exp: return std::exp(*inner);
            case UnaryOp::Log: return std::log(*inner);
        }
    }
    if (const auto* b = std::get_if<BinaryNode>(&e->node)) {
        const auto l = fold_constant(b->lhs);
        const auto r = fold_constant(b->rhs);
        if (!l || !r) return std::nullopt;
        switch (b->op) {
            case BinaryOp::Add: return *l + *r;
            case BinaryOp::Sub: return *l - *r;
            case BinaryOp::Mul: return *l * *r;
            case BinaryOp::Div: return *l / *r;
        }
    }
    if (const auto* p = std::get_if<PowNode>(&e->node)) {
        const auto base = fold_constant(p->base);
        if (!base) return std::nullopt;
        return std::pow(*base, p->exponent);
    }
    return std::nullopt;
}

class Parser {
public:
    Parser(std::string_view src, ExprMode mode) : lex_(src, mode) {}

    ExprPtr parse_all() {
        ExprPtr e = parse_expr();
        if (lex_.peek().kind != Token::Kind::End) {
            throw SyntaxError("unexpected trailing input", lex_.peek().offset);
        }
        return e;
    }

private:
    static ExprPtr make(Expr&& e) { return std::make_shared<const Expr>(std::move(e)); }

    ExprPtr parse_expr() {
        ExprPtr lhs = parse_term();
        while (lex_.peek().kind == Token::Kind::Plus || lex_.peek().kind == Token::Kind::Minus) {
            const auto op = lex_.take().kind == Token::Kind::Plus ? BinaryOp::Add : BinaryOp::Sub;
            ExprPtr rhs = parse_term();
            lhs = make(Expr{BinaryNode{op, std::move(lhs), std::move(rhs)}});
        }
        return lhs;
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_factor();
        while (lex_.peek().kind == Token::Kind::Star || lex_.peek().kind == Token::Kind::Slash) {
            const auto op = lex_.take().kind == Token::Kind::Star ? BinaryOp::Mul : BinaryOp::Div;
            ExprPtr rhs = parse_factor();
            lhs = make(Expr{BinaryNode{op, std::move(lhs), std::move(rhs)}});
        }
        return lhs;
    }

    ExprPtr parse_factor() {
        ExprPtr base = parse_base();
        if (lex_.peek().kind == Token::Kind::Caret) {
            const std::size_t caret = lex_.take().offset;
            ExprPtr rhs = parse_factor();
            const auto folded = fold_constant(rhs);
            if (!folded) {
                throw ExponentError("'^' exponent must be a constant subexpression", caret);
            }
            if (!std::isfinite(*folded)) {
                throw ExponentError("'^' exponent does not fold to a finite constant", caret);
            }
            return make(Expr{PowNode{std::move(base), *folded}});
        }
        return base;
    }

    ExprPtr parse_base() {
        const Token t = lex_.take();
        switch (t.kind) {
            case Token::Kind::Number: return make(Expr{NumberNode{t.number}});
            case Token::Kind::Var: return make(Expr{VarNode{t.var}});
            case Token::Kind::Minus: return make(Expr{UnaryNode{UnaryOp::Neg, parse_base()}});
            case Token::Kind::LParen: {
                ExprPtr e = parse_expr();
                expect_rparen();
                return e;
            }
            case Token::Kind::Func: {
                if (lex_.peek().kind != Token::Kind::LParen) {
                    throw SyntaxError("expected '(' after function name", lex_.peek().offset);
                }
                lex_.take();
                ExprPtr arg = parse_expr();
                expect_rparen();
                return make(Expr{UnaryNode{t.func, std::move(arg)}});
            }
            default: throw SyntaxError("expected number, variable, or '('", t.offset);
        }
    }

    void expect_rparen() {
        if (lex_.peek().kind != Token::Kind::RParen) {
            throw SyntaxError("expected ')'", lex_.peek().offset);
        }
        lex_.take();
    }

    Lexer lex_;
};

inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace detail

inline ExprAst parse(std::string_view src, ExprMode mode) {
    if (src.empty()) throw SyntaxError("empty expression", 0);
    detail::Parser p(src, mode);
    return ExprAst{p.parse_all(), mode};
}

/// Fully parenthesized form that reparses to the identical tree.
inline std::string pretty(const ExprPtr& e) {
    struct Printer {
        std::string operator()(const NumberNode& n) const {
            if (n.value < 0.0 || std::signbit(n.value)) {
                return "-(" + detail::format_double(-n.value) + ")";
            }
            return detail::format_double(n.value);
        }
        std::string operator()(const VarNode& v) const {
            switch (v.var) {
                case VarKind::X: return "x";
                case VarKind::Y: return "y";
                case VarKind::Z: return "z";
            }
            return {};
        }
        std::string operator()(const UnaryNode& u) const {
            const std::string inner = pretty(u.operand);
            switch (u.op) {
                case UnaryOp::Neg: return "-(" + inner + ")";
                case UnaryOp::Sqrt: return "sqrt(" + inner + ")";
                case UnaryOp::Exp: return "exp(" + inner + ")";
                case UnaryOp::Log: return "log(" + inner + ")";
            }
            return {};
        }
        std::string operator()(const BinaryNode& b) const {
            const char op = b.op == BinaryOp::Add   ? '+'
                            : b.op == BinaryOp::Sub ? '-'
                            : b.op == BinaryOp::Mul ? '*'
                                                    : '/';
            return "(" + pretty(b.lhs) + op + pretty(b.rhs) + ")";
        }
        std::string operator()(const PowNode& p) const {
            std::string ex = p.exponent < 0.0 || std::signbit(p.exponent)
                                 ? "-(" + detail::format_double(-p.exponent) + ")"
                                 : detail::format_double(p.exponent);
            return "(" + pretty(p.base) + ")^" + ex;
        }
    };
    return std::visit(Printer{}, e->node);
}

inline std::string pretty(const ExprAst& ast) { return pretty(ast.root); }

inline bool ast_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a->node.index() != b->node.index()) return false;
    if (const auto* n = std::get_if<NumberNode>(&a->node)) {
        return n->value == std::get<NumberNode>(b->node).value;
    }
    if (const auto* v = std::get_if<VarNode>(&a->node)) {
        return v->var == std::get<VarNode>(b->node).var;
    }
    if (const auto* u = std::get_if<UnaryNode>(&a->node)) {
        const auto& ub = std::get<UnaryNode>(b->node);
        return u->op == ub.op && ast_equal(u->operand, ub.operand);
    }
    if (const auto* bi = std::get_if<BinaryNode>(&a->node)) {
        const auto& bb = std::get<BinaryNode>(b->node);
        return bi->op == bb.op && ast_equal(bi->lhs, bb.lhs) && ast_equal(bi->rhs, bb.rhs);
    }
    const auto& pa = std::get<PowNode>(a->node);
    const auto& pb = std::get<PowNode>(b->node);
    return pa.exponent == pb.exponent && ast_equal(pa.base, pb.base);
}

/// Jet of the expression at (px, py). The z sugar expands here, not at parse
/// time, so the x = 0 locus surfaces as the jet engine's singular marker.
inline Jet2 eval_jet(const ExprAst& ast, double px, double py) {
    struct Eval {
        double px, py;

        Jet2 visit(const ExprPtr& e) const {
            if (const auto* n = std::get_if<NumberNode>(&e->node)) return constant(n->value);
            if (const auto* v = std::get_if<VarNode>(&e->node)) {
                switch (v->var) {
                    case VarKind::X: return seed_x(px);
                    case VarKind::Y: return seed_y(py);
                    case VarKind::Z: return seed_y(py) * pow_const(seed_x(px), -1.5);
                }
            }
            if (const auto* u = std::get_if<UnaryNode>(&e->node)) {
                const Jet2 a = visit(u->operand);
                switch (u->op) {
                    case UnaryOp::Neg: return -a;
                    case UnaryOp::Sqrt: return sqrt_jet(a);
                    case UnaryOp::Exp: return exp_jet(a);
                    case UnaryOp::Log: return log_jet(a);
                }
            }
            if (const auto* b = std::get_if<BinaryNode>(&e->node)) {
                const Jet2 l = visit(b->lhs);
                const Jet2 r = visit(b->rhs);
                switch (b->op) {
                    case BinaryOp::Add: return l + r;
                    case BinaryOp::Sub: return l - r;
                    case BinaryOp::Mul: return l * r;
                    case BinaryOp::Div: return l / r;
                }
            }
            const auto& p = std::get<PowNode>(e->node);
            return pow_const(visit(p.base), p.exponent);
        }
    };
    return Eval{px, py}.visit(ast.root);
}

/// Univariate jet of an h-mode profile at z = pz.
inline Jet1 eval_profile(const ExprAst& ast, double pz) {
    struct Eval {
        double pz;

        Jet1 visit(const ExprPtr& e) const {
            if (const auto* n = std::get_if<NumberNode>(&e->node)) return constant1(n->value);
            if (const auto* v = std::get_if<VarNode>(&e->node)) {
                if (v->var != VarKind::Z) {
                    throw ModeError("profile evaluation admits only the variable z", 0);
                }
                return seed_z(pz);
            }
            if (const auto* u = std::get_if<UnaryNode>(&e->node)) {
                const Jet1 a = visit(u->operand);
                switch (u->op) {
                    case UnaryOp::Neg: return -a;
                    case UnaryOp::Sqrt: return sqrt_jet(a);
                    case UnaryOp::Exp: return exp_jet(a);
                    case UnaryOp::Log: return log_jet(a);
                }
            }
            if (const auto* b = std::get_if<BinaryNode>(&e->node)) {
                const Jet1 l = visit(b->lhs);
                const Jet1 r = visit(b->rhs);
                switch (b->op) {
                    case BinaryOp::Add: return l + r;
                    case BinaryOp::Sub: return l - r;
                    case BinaryOp::Mul: return l * r;
                    case BinaryOp::Div: return l / r;
                }
            }
            const auto& p = std::get<PowNode>(e->node);
            return pow_const(visit(p.base), p.exponent);
        }
    };
    return Eval{pz}.visit(ast.root);
}

}  // namespace wpdi
