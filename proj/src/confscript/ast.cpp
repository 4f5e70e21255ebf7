#include "violet/confscript/ast.hpp"

namespace violet::confscript {

const char* to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

bool is_comparison(BinaryOp op) {
  switch (op) {
    case BinaryOp::Eq:
    case BinaryOp::Ne:
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge:
      return true;
    default:
      return false;
  }
}

Expr Expr::int_lit(std::int64_t v, SourceLoc loc) {
  Expr e;
  e.kind = Kind::IntLit;
  e.value = v;
  e.loc = loc;
  return e;
}

Expr Expr::bool_lit(bool v, SourceLoc loc) {
  Expr e;
  e.kind = Kind::BoolLit;
  e.value = v ? 1 : 0;
  e.loc = loc;
  return e;
}

Expr Expr::ref(std::string name, SourceLoc loc) {
  Expr e;
  e.kind = Kind::Name;
  e.name = std::move(name);
  e.loc = loc;
  return e;
}

Expr Expr::make_unary(UnaryOp op, Expr operand, SourceLoc loc) {
  Expr e;
  e.kind = Kind::Unary;
  e.unary = op;
  e.operands.push_back(std::move(operand));
  e.loc = loc;
  return e;
}

Expr Expr::make_binary(BinaryOp op, Expr l, Expr r, SourceLoc loc) {
  Expr e;
  e.kind = Kind::Binary;
  e.binary = op;
  e.operands.push_back(std::move(l));
  e.operands.push_back(std::move(r));
  e.loc = loc;
  return e;
}

const char* to_string(CostMetric m) {
  switch (m) {
    case CostMetric::Latency: return "latency";
    case CostMetric::Syscalls: return "syscalls";
    case CostMetric::FileIoOps: return "file_io_ops";
    case CostMetric::IoBytes: return "io_bytes";
    case CostMetric::SyncOps: return "sync_ops";
    case CostMetric::NetOps: return "net_ops";
  }
  return "?";
}

std::optional<CostMetric> parse_cost_metric(const std::string& text) {
  if (text == "latency") return CostMetric::Latency;
  if (text == "syscalls" || text == "syscall") return CostMetric::Syscalls;
  if (text == "file_io_ops" || text == "file_io") return CostMetric::FileIoOps;
  if (text == "io_bytes") return CostMetric::IoBytes;
  if (text == "sync_ops" || text == "sync") return CostMetric::SyncOps;
  if (text == "net_ops" || text == "net") return CostMetric::NetOps;
  return std::nullopt;
}

const ConfigParam* Program::find_config(std::string_view name) const {
  for (const auto& c : configs)
    if (c.name == name) return &c;
  return nullptr;
}

const InputParam* Program::find_input(std::string_view name) const {
  for (const auto& i : inputs)
    if (i.name == name) return &i;
  return nullptr;
}

const FunctionDef* Program::find_function(std::string_view name) const {
  for (const auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

namespace {
std::optional<std::int64_t> member_index(const Domain& d, std::string_view name) {
  if (d.kind != Domain::Kind::Enum) return std::nullopt;
  for (std::size_t i = 0; i < d.members.size(); ++i)
    if (d.members[i] == name) return static_cast<std::int64_t>(i);
  return std::nullopt;
}
}  // namespace

std::optional<std::int64_t> Program::find_enum_member(std::string_view name) const {
  for (const auto& c : configs)
    if (auto v = member_index(c.domain, name)) return v;
  for (const auto& i : inputs)
    if (auto v = member_index(i.domain, name)) return v;
  for (const auto& f : functions) {
    for (const auto& p : f.params)
      if (auto v = member_index(p.domain, name)) return v;
    if (f.returns)
      if (auto v = member_index(*f.returns, name)) return v;
  }
  return std::nullopt;
}

const Domain* Program::global_domain(std::string_view name) const {
  if (const auto* c = find_config(name)) return &c->domain;
  if (const auto* i = find_input(name)) return &i->domain;
  return nullptr;
}

const Stmt* Program::find_statement(int id) const {
  const Stmt* found = nullptr;
  for (const auto& f : functions) {
    for_each_stmt(f.body, [&](const Stmt& s) {
      if (s.id == id) found = &s;
    });
    if (found) return found;
  }
  return nullptr;
}

const FunctionDef* Program::function_of_statement(int id) const {
  for (const auto& f : functions) {
    bool hit = false;
    for_each_stmt(f.body, [&](const Stmt& s) { hit = hit || s.id == id; });
    if (hit) return &f;
  }
  return nullptr;
}

void number_statements(Program& program) {
  int next_id = 0;
  for (auto& f : program.functions) {
    int next_index = 0;
    for_each_stmt(f.body, [&](Stmt& s) {
      s.id = next_id++;
      s.index = next_index++;
    });
    f.statement_count = next_index;
  }
}

std::vector<const Expr*> statement_exprs(const Stmt& s) {
  std::vector<const Expr*> out;
  if (s.expr) out.push_back(&*s.expr);
  for (const auto& a : s.args) out.push_back(&a);
  return out;
}

}  // namespace violet::confscript
