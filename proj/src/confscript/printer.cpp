#include "violet/confscript/printer.hpp"

#include <sstream>

namespace violet::confscript {

int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return 1;
    case BinaryOp::And: return 2;
    case BinaryOp::Eq:
    case BinaryOp::Ne: return 3;
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return 4;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 5;
    case BinaryOp::Mul: return 6;
  }
  return 0;
}

namespace {

constexpr int kUnaryPrec = 7;

int expr_prec(const Expr& e) {
  if (e.kind == Expr::Kind::Binary) return precedence(e.binary);
  if (e.kind == Expr::Kind::Unary) return kUnaryPrec;
  if (e.kind == Expr::Kind::IntLit && e.value < 0) return kUnaryPrec;
  return 8;
}

void emit(std::ostream& out, const Expr& e, ExprStyle style) {
  auto sub = [&](const Expr& child, bool paren) {
    if (paren) out << '(';
    emit(out, child, style);
    if (paren) out << ')';
  };
  switch (e.kind) {
    case Expr::Kind::IntLit:
      out << e.value;
      break;
    case Expr::Kind::BoolLit:
      out << (e.value ? "true" : "false");
      break;
    case Expr::Kind::Name:
      out << e.name;
      break;
    case Expr::Kind::Unary:
      out << (e.unary == UnaryOp::Not ? "!" : "-");
      sub(e.operands[0], expr_prec(e.operands[0]) < kUnaryPrec ||
                             (e.unary == UnaryOp::Neg && e.operands[0].kind == Expr::Kind::IntLit));
      break;
    case Expr::Kind::Binary: {
      int p = precedence(e.binary);
      // Left-associative: the right operand needs parens at equal precedence.
      sub(e.operands[0], expr_prec(e.operands[0]) < p);
      if (style == ExprStyle::Spaced) {
        out << ' ' << to_string(e.binary) << ' ';
      } else {
        out << to_string(e.binary);
      }
      sub(e.operands[1], expr_prec(e.operands[1]) <= p);
      break;
    }
  }
}

class ProgramPrinter {
 public:
  std::string run(const Program& p) {
    for (const auto& c : p.configs) {
      out_ << "config " << c.name << ": " << c.domain.to_string() << " = "
           << c.domain.format_value(c.default_value) << ";\n";
    }
    for (const auto& i : p.inputs) out_ << "input " << i.name << ": " << i.domain.to_string() << ";\n";
    for (const auto& f : p.functions) {
      out_ << '\n';
      function(f);
    }
    return out_.str();
  }

 private:
  std::ostringstream out_;
  int depth_ = 0;

  void indent() {
    for (int i = 0; i < depth_; ++i) out_ << "  ";
  }

  void function(const FunctionDef& f) {
    if (f.is_extern) out_ << "extern ";
    if (f.is_pure) out_ << "pure ";
    if (f.is_benign) out_ << "benign ";
    out_ << "fn " << f.name << '(';
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      if (i) out_ << ", ";
      out_ << f.params[i].name << ": " << f.params[i].domain.to_string();
    }
    out_ << ')';
    if (f.returns) out_ << " -> " << f.returns->to_string();
    if (f.is_extern) {
      out_ << ";\n";
      return;
    }
    out_ << ' ';
    block(f.body);
    out_ << '\n';
  }

  void block(const Block& b) {
    out_ << "{\n";
    ++depth_;
    for (const auto& s : b) statement(s);
    --depth_;
    indent();
    out_ << '}';
  }

  void args(const std::vector<Expr>& as) {
    out_ << '(';
    for (std::size_t i = 0; i < as.size(); ++i) {
      if (i) out_ << ", ";
      out_ << print_expr(as[i]);
    }
    out_ << ')';
  }

  void rhs(const Stmt& s) {
    if (s.callee) {
      out_ << *s.callee;
      args(s.args);
    } else {
      out_ << print_expr(*s.expr);
    }
  }

  void if_chain(const Stmt& s) {
    out_ << "if (" << print_expr(*s.expr) << ") ";
    block(s.then_block);
    if (s.else_block.size() == 1 && s.else_block[0].kind == Stmt::Kind::If) {
      out_ << " else ";
      if_chain(s.else_block[0]);
      return;
    }
    if (!s.else_block.empty()) {
      out_ << " else ";
      block(s.else_block);
    }
  }

  void statement(const Stmt& s) {
    indent();
    switch (s.kind) {
      case Stmt::Kind::Let:
        out_ << "let " << s.target << " = ";
        rhs(s);
        out_ << ";\n";
        break;
      case Stmt::Kind::Assign:
        out_ << s.target << " = ";
        rhs(s);
        out_ << ";\n";
        break;
      case Stmt::Kind::If:
        if_chain(s);
        out_ << '\n';
        break;
      case Stmt::Kind::While:
        out_ << "while (" << print_expr(*s.expr) << ") bound " << s.bound << ' ';
        block(s.then_block);
        out_ << '\n';
        break;
      case Stmt::Kind::Call:
        out_ << s.target;
        args(s.args);
        out_ << ";\n";
        break;
      case Stmt::Kind::Cost:
        out_ << "cost " << to_string(s.metric) << ' ' << s.amount << ";\n";
        break;
      case Stmt::Kind::Return:
        out_ << "return";
        if (s.expr) out_ << ' ' << print_expr(*s.expr);
        out_ << ";\n";
        break;
    }
  }
};

}  // namespace

std::string print_expr(const Expr& e, ExprStyle style) {
  std::ostringstream out;
  emit(out, e, style);
  return out.str();
}

std::string print_program(const Program& program) { return ProgramPrinter().run(program); }

}  // namespace violet::confscript
