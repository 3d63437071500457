#include "smtrace/expr.hpp"

#include <cctype>
#include <sstream>

namespace smtrace {

Expr make_constant(Rational v) {
    auto n = std::make_shared<ExprNode>();
    n->op = ExprOp::Constant;
    n->value = std::move(v);
    return n;
}

Expr make_q_power(long long e) {
    auto n = std::make_shared<ExprNode>();
    n->op = ExprOp::Q;
    n->k = e;
    return n;
}

Expr make_eta(long long k) {
    if (k < 1) throw InputError("eta argument must be a positive integer");
    auto n = std::make_shared<ExprNode>();
    n->op = ExprOp::Eta;
    n->k = k;
    return n;
}

Expr make_binary(ExprOp op, Expr a, Expr b) {
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

Expr make_pow(Expr base, long long e) {
    auto n = std::make_shared<ExprNode>();
    n->op = ExprOp::Pow;
    n->k = e;
    n->lhs = std::move(base);
    return n;
}

Expr make_neg(Expr a) {
    auto n = std::make_shared<ExprNode>();
    n->op = ExprOp::Neg;
    n->lhs = std::move(a);
    return n;
}

namespace {

class Parser {
  public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr parse() {
        skip_ws();
        Expr e = expression();
        skip_ws();
        if (pos_ < text_.size()) fail("unexpected trailing input");
        return e;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) const {
        int line = 1, col = 1;
        for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
            if (text_[i] == '\n') { ++line; col = 1; }
            else ++col;
        }
        throw ParseError(msg, line, col);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) { ++pos_; return true; }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    long long integer() {
        skip_ws();
        bool neg = false;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+'))
            neg = (text_[pos_++] == '-');
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            fail("expected integer");
        long long v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            v = v * 10 + (text_[pos_++] - '0');
            if (v > (1LL << 40)) fail("integer literal too large");
        }
        return neg ? -v : v;
    }

    Expr expression() {
        Expr e = term();
        for (;;) {
            if (eat('+')) e = make_binary(ExprOp::Add, e, term());
            else if (eat('-')) e = make_binary(ExprOp::Sub, e, term());
            else return e;
        }
    }

    Expr term() {
        Expr e = factor();
        for (;;) {
            if (eat('*')) e = make_binary(ExprOp::Mul, e, factor());
            else if (eat('/')) e = make_binary(ExprOp::Div, e, factor());
            else return e;
        }
    }

    Expr factor() {
        if (eat('-')) return make_neg(factor());
        Expr base = atom();
        if (eat('^')) {
            long long e;
            if (eat('(')) {
                e = integer();
                if (!eat(')')) fail("expected ')'");
            } else {
                e = integer();
            }
            return make_pow(base, e);
        }
        return base;
    }

    Expr atom() {
        char c = peek();
        if (c == '(') {
            eat('(');
            Expr e = expression();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return make_constant(Rational(integer()));
        if (c == 'q') {
            ++pos_;
            return make_q_power(1);
        }
        if (text_.compare(pos_, 3, "eta") == 0) {
            pos_ += 3;
            if (!eat('(')) fail("expected '(' after eta");
            long long k = integer();
            if (k < 1) fail("eta argument must be positive");
            if (!eat(')')) fail("expected ')'");
            return make_eta(k);
        }
        fail("expected number, q, eta(k) or '('");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text).parse(); }

Expr builtin_f37() {
    static const Expr f = parse_expr("(eta(1)/eta(37))^2 - 2 + 37*(eta(37)/eta(1))^2");
    return f;
}

std::string to_string(const Expr& e) {
    std::ostringstream os;
    switch (e->op) {
        case ExprOp::Constant: os << e->value; break;
        case ExprOp::Q: os << "q" << (e->k != 1 ? "^" + std::to_string(e->k) : ""); break;
        case ExprOp::Eta: os << "eta(" << e->k << ")"; break;
        case ExprOp::Add: os << "(" << to_string(e->lhs) << " + " << to_string(e->rhs) << ")"; break;
        case ExprOp::Sub: os << "(" << to_string(e->lhs) << " - " << to_string(e->rhs) << ")"; break;
        case ExprOp::Mul: os << "(" << to_string(e->lhs) << " * " << to_string(e->rhs) << ")"; break;
        case ExprOp::Div: os << "(" << to_string(e->lhs) << " / " << to_string(e->rhs) << ")"; break;
        case ExprOp::Pow: os << to_string(e->lhs) << "^" << e->k; break;
        case ExprOp::Neg: os << "-" << to_string(e->lhs); break;
    }
    return os.str();
}

}  // namespace smtrace
