#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "violet/confscript/domain.hpp"

namespace violet::confscript {

/// Source position. Positions never take part in structural equality so a
/// re-parsed pretty-print compares equal to the original.
struct SourceLoc {
  int line = 0;
  int column = 0;
  friend bool operator==(const SourceLoc&, const SourceLoc&) { return true; }
};

enum class UnaryOp { Neg, Not };
enum class BinaryOp { Add, Sub, Mul, Eq, Ne, Lt, Le, Gt, Ge, And, Or };

const char* to_string(BinaryOp op);
bool is_comparison(BinaryOp op);

struct Expr {
  enum class Kind { IntLit, BoolLit, Name, Unary, Binary };

  Kind kind = Kind::IntLit;
  std::int64_t value = 0;  // IntLit / BoolLit
  std::string name;        // Name
  UnaryOp unary = UnaryOp::Neg;
  BinaryOp binary = BinaryOp::Add;
  std::vector<Expr> operands;  // 1 for Unary, 2 for Binary
  SourceLoc loc;

  static Expr int_lit(std::int64_t v, SourceLoc loc = {});
  static Expr bool_lit(bool v, SourceLoc loc = {});
  static Expr ref(std::string name, SourceLoc loc = {});
  static Expr make_unary(UnaryOp op, Expr e, SourceLoc loc = {});
  static Expr make_binary(BinaryOp op, Expr l, Expr r, SourceLoc loc = {});

  friend bool operator==(const Expr&, const Expr&) = default;
};

/// The six metrics a `cost` statement may charge; instructions are implicit.
enum class CostMetric { Latency, Syscalls, FileIoOps, IoBytes, SyncOps, NetOps };

const char* to_string(CostMetric m);
std::optional<CostMetric> parse_cost_metric(const std::string& text);

struct Stmt;
using Block = std::vector<Stmt>;

struct Stmt {
  enum class Kind { Let, Assign, If, While, Call, Cost, Return };

  Kind kind = Kind::Call;
  SourceLoc loc;

  /// Let/Assign: target local. Call: callee.
  std::string target;
  /// Let/Assign with a call on the right-hand side.
  std::optional<std::string> callee;
  std::vector<Expr> args;

  /// Let/Assign value, If/While condition, Return value.
  std::optional<Expr> expr;

  Block then_block;  // If then-arm, While body
  Block else_block;  // If else-arm (a lone If here prints as `else if`)

  std::int64_t bound = 0;  // While iteration cap
  CostMetric metric = CostMetric::Latency;
  std::int64_t amount = 0;

  /// Program-wide pre-order id and per-function pre-order index, assigned by
  /// number_statements().
  int id = -1;
  int index = -1;

  bool is_branch() const { return kind == Kind::If || kind == Kind::While; }

  friend bool operator==(const Stmt&, const Stmt&) = default;
};

struct Param {
  std::string name;
  Domain domain;
  friend bool operator==(const Param&, const Param&) = default;
};

struct FunctionDef {
  std::string name;
  std::vector<Param> params;
  std::optional<Domain> returns;
  Block body;
  bool is_extern = false;
  bool is_pure = false;
  bool is_benign = false;
  SourceLoc loc;
  /// Number of statements in body (pre-order), set by number_statements().
  int statement_count = 0;

  friend bool operator==(const FunctionDef&, const FunctionDef&) = default;
};

struct ConfigParam {
  std::string name;
  Domain domain;
  std::int64_t default_value = 0;
  SourceLoc loc;
  friend bool operator==(const ConfigParam&, const ConfigParam&) = default;
};

struct InputParam {
  std::string name;
  Domain domain;
  SourceLoc loc;
  friend bool operator==(const InputParam&, const InputParam&) = default;
};

struct Program {
  std::vector<ConfigParam> configs;
  std::vector<InputParam> inputs;
  std::vector<FunctionDef> functions;
  std::string entry = "main";

  const ConfigParam* find_config(std::string_view name) const;
  const InputParam* find_input(std::string_view name) const;
  const FunctionDef* find_function(std::string_view name) const;
  /// Enum member lookup across every enum-typed config, input and parameter.
  std::optional<std::int64_t> find_enum_member(std::string_view name) const;
  /// Domain of a config or input, if `name` is one.
  const Domain* global_domain(std::string_view name) const;

  /// Locates a statement by program-wide id; nullptr if absent.
  const Stmt* find_statement(int id) const;
  const FunctionDef* function_of_statement(int id) const;

  friend bool operator==(const Program&, const Program&) = default;
};

/// Assigns Stmt::id (program-wide) and Stmt::index (per function) in
/// pre-order, functions in declaration order.
void number_statements(Program& program);

/// Visits every statement of a block in pre-order.
template <typename Block, typename F>
void for_each_stmt(Block& block, F&& f) {
  for (auto& s : block) {
    f(s);
    for_each_stmt(s.then_block, f);
    for_each_stmt(s.else_block, f);
  }
}

/// Visits every Name referenced by an expression.
template <typename F>
void for_each_name(const Expr& e, F&& f) {
  if (e.kind == Expr::Kind::Name) f(e);
  for (const auto& o : e.operands) for_each_name(o, f);
}

/// Expressions read by a statement itself (condition, value, call arguments).
std::vector<const Expr*> statement_exprs(const Stmt& s);

}  // namespace violet::confscript
