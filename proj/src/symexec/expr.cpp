#include "violet/symexec/expr.hpp"

#include <optional>

#include "violet/confscript/parser.hpp"
#include "violet/confscript/printer.hpp"
#include "violet/error.hpp"

namespace violet::symexec {

bool is_comparison(Op op) {
  switch (op) {
    case Op::Eq:
    case Op::Ne:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
      return true;
    default:
      return false;
  }
}

bool is_boolean_valued(Op op) {
  return is_comparison(op) || op == Op::Not || op == Op::And || op == Op::Or;
}

ExprPtr constant(std::int64_t v) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Const;
  n->value = v;
  return n;
}

ExprPtr variable(VarId id) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Var;
  n->var = id;
  return n;
}

std::int64_t apply(Op op, std::int64_t a, std::int64_t b) {
  switch (op) {
    case Op::Neg: return -a;
    case Op::Not: return a == 0 ? 1 : 0;
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Eq: return a == b;
    case Op::Ne: return a != b;
    case Op::Lt: return a < b;
    case Op::Le: return a <= b;
    case Op::Gt: return a > b;
    case Op::Ge: return a >= b;
    case Op::And: return a != 0 && b != 0;
    case Op::Or: return a != 0 || b != 0;
    case Op::Const:
    case Op::Var:
      break;
  }
  throw Error("apply: not an operator");
}

ExprPtr unary(Op op, ExprPtr a) {
  if (is_concrete(a)) return constant(apply(op, a->value));
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = std::move(a);
  return n;
}

ExprPtr binary(Op op, ExprPtr a, ExprPtr b) {
  if (is_concrete(a) && is_concrete(b)) return constant(apply(op, a->value, b->value));
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

bool same_expr(const ExprNode& a, const ExprNode& b) {
  if (&a == &b) return true;
  if (a.op != b.op) return false;
  switch (a.op) {
    case Op::Const: return a.value == b.value;
    case Op::Var: return a.var == b.var;
    case Op::Neg:
    case Op::Not: return same_expr(*a.lhs, *b.lhs);
    default: return same_expr(*a.lhs, *b.lhs) && same_expr(*a.rhs, *b.rhs);
  }
}

std::int64_t evaluate(const ExprNode& e, const std::vector<std::int64_t>& values) {
  switch (e.op) {
    case Op::Const: return e.value;
    case Op::Var: return values.at(static_cast<std::size_t>(e.var));
    case Op::Neg:
    case Op::Not: return apply(e.op, evaluate(*e.lhs, values));
    default: return apply(e.op, evaluate(*e.lhs, values), evaluate(*e.rhs, values));
  }
}

void collect_vars(const ExprNode& e, std::set<VarId>& out) {
  if (e.op == Op::Var) out.insert(e.var);
  if (e.lhs) collect_vars(*e.lhs, out);
  if (e.rhs) collect_vars(*e.rhs, out);
}

std::set<VarId> vars_of(const ExprNode& e) {
  std::set<VarId> out;
  collect_vars(e, out);
  return out;
}

const char* to_string(VarKind k) {
  switch (k) {
    case VarKind::Config: return "config";
    case VarKind::Input: return "input";
    case VarKind::Internal: return "internal";
  }
  return "?";
}

VarId VariableTable::add(const std::string& name, VarKind kind, const Domain& domain) {
  if (auto id = find(name)) return *id;
  vars_.push_back({name, kind, domain});
  return static_cast<VarId>(vars_.size() - 1);
}

std::optional<VarId> VariableTable::find(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].name == name) return static_cast<VarId>(i);
  return std::nullopt;
}

std::optional<std::int64_t> VariableTable::enum_member(const std::string& name) const {
  for (const auto& v : vars_) {
    if (v.domain.kind != Domain::Kind::Enum) continue;
    for (std::size_t i = 0; i < v.domain.members.size(); ++i)
      if (v.domain.members[i] == name) return static_cast<std::int64_t>(i);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Text form

namespace {

using confscript::BinaryOp;
using confscript::Expr;
using confscript::UnaryOp;

BinaryOp to_binary(Op op) {
  switch (op) {
    case Op::Add: return BinaryOp::Add;
    case Op::Sub: return BinaryOp::Sub;
    case Op::Mul: return BinaryOp::Mul;
    case Op::Eq: return BinaryOp::Eq;
    case Op::Ne: return BinaryOp::Ne;
    case Op::Lt: return BinaryOp::Lt;
    case Op::Le: return BinaryOp::Le;
    case Op::Gt: return BinaryOp::Gt;
    case Op::Ge: return BinaryOp::Ge;
    case Op::And: return BinaryOp::And;
    case Op::Or: return BinaryOp::Or;
    default: throw Error("not a binary operator");
  }
}

Op from_binary(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return Op::Add;
    case BinaryOp::Sub: return Op::Sub;
    case BinaryOp::Mul: return Op::Mul;
    case BinaryOp::Eq: return Op::Eq;
    case BinaryOp::Ne: return Op::Ne;
    case BinaryOp::Lt: return Op::Lt;
    case BinaryOp::Le: return Op::Le;
    case BinaryOp::Gt: return Op::Gt;
    case BinaryOp::Ge: return Op::Ge;
    case BinaryOp::And: return Op::And;
    case BinaryOp::Or: return Op::Or;
  }
  throw Error("unknown operator");
}

const Domain* enum_domain(const ExprNode& e, const VariableTable& t) {
  if (e.op != Op::Var) return nullptr;
  const auto& d = t.at(e.var).domain;
  return d.kind == Domain::Kind::Enum ? &d : nullptr;
}

Expr to_ast(const ExprNode& e, const VariableTable& t) {
  switch (e.op) {
    case Op::Const: return Expr::int_lit(e.value);
    case Op::Var: return Expr::ref(t.at(e.var).name);
    case Op::Neg: return Expr::make_unary(UnaryOp::Neg, to_ast(*e.lhs, t));
    case Op::Not: return Expr::make_unary(UnaryOp::Not, to_ast(*e.lhs, t));
    default: break;
  }
  Expr l = to_ast(*e.lhs, t);
  Expr r = to_ast(*e.rhs, t);
  if (is_comparison(e.op)) {
    auto member = [](const Domain* d, const ExprNode& c, Expr& out) {
      if (d && c.op == Op::Const && d->contains(c.value))
        out = Expr::ref(d->members[static_cast<std::size_t>(c.value)]);
    };
    member(enum_domain(*e.lhs, t), *e.rhs, r);
    member(enum_domain(*e.rhs, t), *e.lhs, l);
  }
  return Expr::make_binary(to_binary(e.op), std::move(l), std::move(r));
}

}  // namespace

std::string to_text(const ExprNode& e, const VariableTable& table) {
  return confscript::print_expr(to_ast(e, table), confscript::ExprStyle::Compact);
}

ExprPtr from_ast(const confscript::Expr& e, const VariableTable& table) {
  switch (e.kind) {
    case Expr::Kind::IntLit:
    case Expr::Kind::BoolLit:
      return constant(e.value);
    case Expr::Kind::Name:
      if (auto id = table.find(e.name)) return variable(*id);
      if (auto m = table.enum_member(e.name)) return constant(*m);
      throw UnknownName("unknown name '" + e.name + "'");
    case Expr::Kind::Unary:
      return unary(e.unary == UnaryOp::Neg ? Op::Neg : Op::Not, from_ast(e.operands[0], table));
    case Expr::Kind::Binary:
      return binary(from_binary(e.binary), from_ast(e.operands[0], table),
                    from_ast(e.operands[1], table));
  }
  throw Error("unknown expression kind");
}

ExprPtr parse_atom(const std::string& text, const VariableTable& table) {
  return from_ast(confscript::parse_expression(text), table);
}

// ---------------------------------------------------------------------------
// Normal form

namespace {

Op flip(Op op) {
  switch (op) {
    case Op::Lt: return Op::Gt;
    case Op::Le: return Op::Ge;
    case Op::Gt: return Op::Lt;
    case Op::Ge: return Op::Le;
    default: return op;
  }
}

Op complement(Op op) {
  switch (op) {
    case Op::Eq: return Op::Ne;
    case Op::Ne: return Op::Eq;
    case Op::Lt: return Op::Ge;
    case Op::Le: return Op::Gt;
    case Op::Gt: return Op::Le;
    case Op::Ge: return Op::Lt;
    default: throw Error("not a comparison");
  }
}

/// a*var + b, when `e` has that shape over at most one variable.
struct Linear {
  std::optional<VarId> var;
  std::int64_t a = 0;
  std::int64_t b = 0;
};

std::optional<Linear> linear(const ExprNode& e) {
  switch (e.op) {
    case Op::Const: return Linear{std::nullopt, 0, e.value};
    case Op::Var: return Linear{e.var, 1, 0};
    case Op::Neg: {
      auto l = linear(*e.lhs);
      if (l) l->a = -l->a, l->b = -l->b;
      return l;
    }
    case Op::Add:
    case Op::Sub: {
      auto l = linear(*e.lhs), r = linear(*e.rhs);
      if (!l || !r || (l->var && r->var && *l->var != *r->var)) return std::nullopt;
      std::int64_t sign = e.op == Op::Add ? 1 : -1;
      return Linear{l->var ? l->var : r->var, l->a + sign * r->a, l->b + sign * r->b};
    }
    case Op::Mul: {
      auto l = linear(*e.lhs), r = linear(*e.rhs);
      if (!l || !r || (l->var && r->var)) return std::nullopt;
      if (r->var) std::swap(l, r);
      return Linear{l->var, l->a * r->b, l->b * r->b};
    }
    default: return std::nullopt;
  }
}

ExprPtr compare(Op op, ExprPtr a, ExprPtr b) {
  if (is_concrete(a) && !is_concrete(b)) return compare(flip(op), std::move(b), std::move(a));
  // `x-1+2 > 3` reads better as `x > 2`.
  if (is_concrete(b) && a->op != Op::Var) {
    auto l = linear(*a);
    if (l && l->var && (l->a == 1 || l->a == -1)) {
      if (l->a == 1) return binary(op, variable(*l->var), constant(b->value - l->b));
      return binary(flip(op), variable(*l->var), constant(l->b - b->value));
    }
  }
  return binary(op, std::move(a), std::move(b));
}

ExprPtr positive(const ExprPtr& e);

ExprPtr negative(const ExprPtr& e) {
  switch (e->op) {
    case Op::Const: return constant(e->value == 0 ? 1 : 0);
    case Op::Not: return positive(e->lhs);
    case Op::And: return binary(Op::Or, negative(e->lhs), negative(e->rhs));
    case Op::Or: return binary(Op::And, negative(e->lhs), negative(e->rhs));
    default:
      if (is_comparison(e->op)) return compare(complement(e->op), e->lhs, e->rhs);
      return compare(Op::Eq, e, constant(0));
  }
}

ExprPtr positive(const ExprPtr& e) {
  switch (e->op) {
    case Op::Const: return constant(e->value != 0 ? 1 : 0);
    case Op::Not: return negative(e->lhs);
    case Op::And:
    case Op::Or: return binary(e->op, positive(e->lhs), positive(e->rhs));
    default:
      if (is_comparison(e->op)) return compare(e->op, e->lhs, e->rhs);
      return compare(Op::Ne, e, constant(0));
  }
}

void split(const ExprPtr& e, std::vector<ExprPtr>& out) {
  if (e->op == Op::And) {
    split(e->lhs, out);
    split(e->rhs, out);
  } else if (!(is_concrete(e) && e->value != 0)) {
    out.push_back(e);
  }
}

}  // namespace

ExprPtr negate(const ExprPtr& e) { return negative(e); }

std::vector<ExprPtr> branch_atoms(const ExprPtr& cond, bool outcome) {
  std::vector<ExprPtr> out;
  split(outcome ? positive(cond) : negative(cond), out);
  return out;
}

}  // namespace violet::symexec
