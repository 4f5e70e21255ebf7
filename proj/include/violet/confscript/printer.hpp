#pragma once

#include <string>

#include "violet/confscript/ast.hpp"

namespace violet::confscript {

enum class ExprStyle {
  Spaced,   // `a == 1 && b`, used for program text
  Compact,  // `a==1&&b`, used for constraint atoms
};

/// Prints an expression with the minimum parentheses needed to re-parse it
/// to the same tree.
std::string print_expr(const Expr& e, ExprStyle style = ExprStyle::Spaced);

/// Canonical program text; parse(print_program(p)) == p structurally.
std::string print_program(const Program& program);

/// Binding strength used by the expression printers (higher binds tighter).
int precedence(BinaryOp op);

}  // namespace violet::confscript
