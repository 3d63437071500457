#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "smtrace/types.hpp"

namespace smtrace {

// Expression tree for eta-quotient / Laurent-in-q modular function inputs.
// Grammar (CLI expression files): terms of the form eta(k) meaning eta(kz),
// integer literals, q^n prefactors, operators + - * / ^, parentheses.
struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

enum class ExprOp { Constant, Q, Eta, Add, Sub, Mul, Div, Pow, Neg };

struct ExprNode {
    ExprOp op;
    Rational value;       // Constant
    long long k = 0;      // Eta: eta(k z); Pow: integer exponent; Q: exponent
    Expr lhs, rhs;
};

Expr make_constant(Rational v);
Expr make_q_power(long long n);
Expr make_eta(long long k);
Expr make_binary(ExprOp op, Expr a, Expr b);
Expr make_pow(Expr base, long long e);
Expr make_neg(Expr a);

// Parse error with 1-based line/column.
struct ParseError : InputError {
    int line, column;
    ParseError(const std::string& msg, int line_, int col_)
        : InputError(msg + " at line " + std::to_string(line_) + ", column "
                     + std::to_string(col_)),
          line(line_), column(col_) {}
};

Expr parse_expr(std::string_view text);

// The worked level-37 example: (eta(1)/eta(37))^2 - 2 + 37*(eta(37)/eta(1))^2.
Expr builtin_f37();

std::string to_string(const Expr& e);

}  // namespace smtrace
