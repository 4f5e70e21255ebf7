#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "violet/confscript/ast.hpp"
#include "violet/confscript/domain.hpp"

namespace violet::symexec {

using confscript::Domain;
using VarId = int;

enum class Op { Const, Var, Neg, Not, Add, Sub, Mul, Eq, Ne, Lt, Le, Gt, Ge, And, Or };

bool is_comparison(Op op);
bool is_boolean_valued(Op op);

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

/// Immutable symbolic expression over variables of a VariableTable. Node
/// identity (the pointer) is what the taint map tracks, so copies of a value
/// share one node.
struct ExprNode {
  Op op = Op::Const;
  std::int64_t value = 0;  // Const
  VarId var = -1;          // Var
  ExprPtr lhs;             // unary operand or left operand
  ExprPtr rhs;
};

ExprPtr constant(std::int64_t v);
ExprPtr variable(VarId id);
/// Builders fold when every operand is constant.
ExprPtr unary(Op op, ExprPtr a);
ExprPtr binary(Op op, ExprPtr a, ExprPtr b);

inline bool is_concrete(const ExprPtr& e) { return e->op == Op::Const; }

/// Structural equality (pointer identity not required).
bool same_expr(const ExprNode& a, const ExprNode& b);

std::int64_t apply(Op op, std::int64_t a, std::int64_t b = 0);

/// Evaluates under a dense assignment indexed by VarId.
std::int64_t evaluate(const ExprNode& e, const std::vector<std::int64_t>& values);

void collect_vars(const ExprNode& e, std::set<VarId>& out);
std::set<VarId> vars_of(const ExprNode& e);

enum class VarKind { Config, Input, Internal };
const char* to_string(VarKind k);

struct Variable {
  std::string name;
  VarKind kind = VarKind::Config;
  Domain domain;
  friend bool operator==(const Variable&, const Variable&) = default;
};

/// Symbolic variables of one exploration. Internal variables (fresh extern
/// returns) are named `extern#k`.
class VariableTable {
 public:
  /// Returns the existing id when `name` is already present.
  VarId add(const std::string& name, VarKind kind, const Domain& domain);
  std::optional<VarId> find(const std::string& name) const;
  const Variable& at(VarId id) const { return vars_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return vars_.size(); }
  const std::vector<Variable>& variables() const { return vars_; }

  /// Enum member value by name, across every enum-typed variable.
  std::optional<std::int64_t> enum_member(const std::string& name) const;

  friend bool operator==(const VariableTable&, const VariableTable&) = default;

 private:
  std::vector<Variable> vars_;
};

/// Compact source spelling (`flush_at_trx_commit==1`, `sql_command==INSERT`).
/// Constants compared against an enum variable print as member names.
std::string to_text(const ExprNode& e, const VariableTable& table);

/// Converts a parsed expression. Names resolve to table variables, then to
/// enum members; anything else throws UnknownName.
ExprPtr from_ast(const confscript::Expr& e, const VariableTable& table);

/// Parses atom text produced by to_text.
ExprPtr parse_atom(const std::string& text, const VariableTable& table);

/// Negation normal form of `cond` (or of its negation when `outcome` is
/// false), split at top-level conjunctions. Integer-valued conditions become
/// `e!=0` / `e==0`, constants move to the right, constant-true atoms vanish.
std::vector<ExprPtr> branch_atoms(const ExprPtr& cond, bool outcome);

/// Negation in normal form (single expression).
ExprPtr negate(const ExprPtr& e);

}  // namespace violet::symexec
