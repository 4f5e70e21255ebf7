#include "violet/confscript/parser.hpp"

#include <fstream>
#include <sstream>

#include "violet/confscript/lexer.hpp"

namespace violet::confscript {

namespace {

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Program program() {
    Program p;
    while (!at_end()) {
      if (peek_kw("config")) {
        p.configs.push_back(config_decl());
      } else if (peek_kw("input")) {
        p.inputs.push_back(input_decl());
      } else if (peek_kw("fn") || peek_kw("extern") || peek_kw("pure") || peek_kw("benign")) {
        p.functions.push_back(function_decl());
      } else {
        fail_expected({"config", "input", "fn", "extern"});
      }
    }
    return p;
  }

  Expr standalone_expression() {
    Expr e = expression();
    if (!at_end()) fail_expected({"end of expression"});
    return e;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at_end() const { return peek().kind == TokenKind::End; }
  SourceLoc loc() const { return {peek().line, peek().column}; }

  bool peek_kw(std::string_view kw, std::size_t ahead = 0) const {
    return peek(ahead).kind == TokenKind::Keyword && peek(ahead).text == kw;
  }
  bool peek_punct(std::string_view p, std::size_t ahead = 0) const {
    return peek(ahead).kind == TokenKind::Punct && peek(ahead).text == p;
  }

  [[noreturn]] void fail_expected(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string found = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
    std::string msg = "expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    msg += ", found " + found;
    throw SyntaxError(Diagnostic{Diagnostic::Severity::Error, t.line, t.column, msg},
                      std::move(expected));
  }

  void expect_punct(std::string_view p) {
    if (!peek_punct(p)) fail_expected({"'" + std::string(p) + "'"});
    ++pos_;
  }
  void expect_kw(std::string_view kw) {
    if (!peek_kw(kw)) fail_expected({"'" + std::string(kw) + "'"});
    ++pos_;
  }
  bool accept_punct(std::string_view p) {
    if (!peek_punct(p)) return false;
    ++pos_;
    return true;
  }
  bool accept_kw(std::string_view kw) {
    if (!peek_kw(kw)) return false;
    ++pos_;
    return true;
  }
  std::string identifier() {
    if (peek().kind != TokenKind::Ident) fail_expected({"identifier"});
    return toks_[pos_++].text;
  }
  std::int64_t integer() {
    if (peek().kind != TokenKind::Int) fail_expected({"integer"});
    return toks_[pos_++].value;
  }
  std::int64_t signed_integer() {
    bool neg = accept_punct("-");
    std::int64_t v = integer();
    return neg ? -v : v;
  }

  Domain domain() {
    if (accept_kw("bool")) return Domain::boolean();
    if (accept_kw("int")) {
      if (!accept_kw("in")) return Domain::unbounded();
      expect_punct("[");
      std::int64_t lo = signed_integer();
      expect_punct(",");
      std::int64_t hi = signed_integer();
      expect_punct("]");
      return Domain::integer(lo, hi);
    }
    if (accept_kw("enum")) {
      expect_punct("{");
      std::vector<std::string> members;
      if (!peek_punct("}")) {
        members.push_back(identifier());
        while (accept_punct(",")) members.push_back(identifier());
      }
      expect_punct("}");
      return Domain::enumeration(std::move(members));
    }
    fail_expected({"'bool'", "'int'", "'enum'"});
  }

  ConfigParam config_decl() {
    ConfigParam c;
    c.loc = loc();
    expect_kw("config");
    c.name = identifier();
    expect_punct(":");
    c.domain = domain();
    expect_punct("=");
    SourceLoc vloc = loc();
    if (accept_kw("true")) {
      c.default_value = 1;
    } else if (accept_kw("false")) {
      c.default_value = 0;
    } else if (peek().kind == TokenKind::Ident) {
      std::string member = identifier();
      auto v = c.domain.parse_value(member);
      if (!v)
        throw SemanticError({Diagnostic{Diagnostic::Severity::Error, vloc.line, vloc.column,
                                        "default '" + member + "' is not a member of " +
                                            c.domain.to_string()}});
      c.default_value = *v;
    } else {
      c.default_value = signed_integer();
    }
    expect_punct(";");
    return c;
  }

  InputParam input_decl() {
    InputParam in;
    in.loc = loc();
    expect_kw("input");
    in.name = identifier();
    expect_punct(":");
    in.domain = domain();
    expect_punct(";");
    return in;
  }

  FunctionDef function_decl() {
    FunctionDef f;
    f.loc = loc();
    for (;;) {
      if (accept_kw("extern")) {
        f.is_extern = true;
      } else if (accept_kw("pure")) {
        f.is_pure = true;
      } else if (accept_kw("benign")) {
        f.is_benign = true;
      } else {
        break;
      }
    }
    expect_kw("fn");
    f.name = identifier();
    expect_punct("(");
    if (!peek_punct(")")) {
      do {
        Param p;
        p.name = identifier();
        expect_punct(":");
        p.domain = domain();
        f.params.push_back(std::move(p));
      } while (accept_punct(","));
    }
    expect_punct(")");
    if (accept_punct("->")) f.returns = domain();
    if (accept_punct(";")) {
      if (!f.is_extern)
        throw SemanticError({Diagnostic{Diagnostic::Severity::Error, f.loc.line, f.loc.column,
                                        "function '" + f.name + "' needs a body"}});
      return f;
    }
    if (!peek_punct("{")) fail_expected({"'{'", "';'"});
    f.body = block();
    if (f.is_extern)
      throw SemanticError({Diagnostic{Diagnostic::Severity::Error, f.loc.line, f.loc.column,
                                      "extern function '" + f.name + "' must not have a body"}});
    return f;
  }

  Block block() {
    expect_punct("{");
    Block b;
    while (!peek_punct("}")) {
      if (at_end()) fail_expected({"'}'"});
      b.push_back(statement());
    }
    expect_punct("}");
    return b;
  }

  void call_tail(Stmt& s) {
    expect_punct("(");
    if (!peek_punct(")")) {
      do {
        s.args.push_back(expression());
      } while (accept_punct(","));
    }
    expect_punct(")");
  }

  void assignment_rhs(Stmt& s) {
    if (peek().kind == TokenKind::Ident && peek_punct("(", 1)) {
      s.callee = identifier();
      call_tail(s);
    } else {
      s.expr = expression();
    }
  }

  Stmt if_statement() {
    Stmt s;
    s.kind = Stmt::Kind::If;
    s.loc = loc();
    expect_kw("if");
    expect_punct("(");
    s.expr = expression();
    expect_punct(")");
    s.then_block = block();
    if (accept_kw("else")) {
      if (peek_kw("if")) {
        s.else_block.push_back(if_statement());
      } else {
        s.else_block = block();
      }
    }
    return s;
  }

  Stmt statement() {
    Stmt s;
    s.loc = loc();
    if (peek_kw("if")) return if_statement();
    if (accept_kw("let")) {
      s.kind = Stmt::Kind::Let;
      s.target = identifier();
      expect_punct("=");
      assignment_rhs(s);
      expect_punct(";");
      return s;
    }
    if (accept_kw("while")) {
      s.kind = Stmt::Kind::While;
      expect_punct("(");
      s.expr = expression();
      expect_punct(")");
      expect_kw("bound");
      s.bound = integer();
      s.then_block = block();
      return s;
    }
    if (accept_kw("cost")) {
      s.kind = Stmt::Kind::Cost;
      SourceLoc mloc = loc();
      std::string metric = identifier();
      auto m = parse_cost_metric(metric);
      if (!m)
        throw SemanticError({Diagnostic{
            Diagnostic::Severity::Error, mloc.line, mloc.column,
            "unknown cost metric '" + metric +
                "' (expected latency, syscalls, file_io_ops, io_bytes, sync_ops or net_ops)"}});
      s.metric = *m;
      s.amount = integer();
      expect_punct(";");
      return s;
    }
    if (accept_kw("return")) {
      s.kind = Stmt::Kind::Return;
      if (!peek_punct(";")) s.expr = expression();
      expect_punct(";");
      return s;
    }
    if (peek().kind == TokenKind::Ident) {
      std::string name = identifier();
      if (peek_punct("(")) {
        s.kind = Stmt::Kind::Call;
        s.target = name;
        call_tail(s);
        expect_punct(";");
        return s;
      }
      if (accept_punct("=")) {
        s.kind = Stmt::Kind::Assign;
        s.target = name;
        assignment_rhs(s);
        expect_punct(";");
        return s;
      }
      fail_expected({"'('", "'='"});
    }
    fail_expected({"statement"});
  }

  // Precedence climbing: || < && < equality < relational < additive < multiplicative < unary.
  Expr expression() { return or_expr(); }

  Expr or_expr() {
    Expr lhs = and_expr();
    while (peek_punct("||")) {
      SourceLoc l = loc();
      ++pos_;
      lhs = Expr::make_binary(BinaryOp::Or, std::move(lhs), and_expr(), l);
    }
    return lhs;
  }

  Expr and_expr() {
    Expr lhs = equality();
    while (peek_punct("&&")) {
      SourceLoc l = loc();
      ++pos_;
      lhs = Expr::make_binary(BinaryOp::And, std::move(lhs), equality(), l);
    }
    return lhs;
  }

  Expr equality() {
    Expr lhs = relational();
    for (;;) {
      SourceLoc l = loc();
      if (accept_punct("==")) {
        lhs = Expr::make_binary(BinaryOp::Eq, std::move(lhs), relational(), l);
      } else if (accept_punct("!=")) {
        lhs = Expr::make_binary(BinaryOp::Ne, std::move(lhs), relational(), l);
      } else {
        return lhs;
      }
    }
  }

  Expr relational() {
    Expr lhs = additive();
    for (;;) {
      SourceLoc l = loc();
      if (accept_punct("<=")) {
        lhs = Expr::make_binary(BinaryOp::Le, std::move(lhs), additive(), l);
      } else if (accept_punct(">=")) {
        lhs = Expr::make_binary(BinaryOp::Ge, std::move(lhs), additive(), l);
      } else if (accept_punct("<")) {
        lhs = Expr::make_binary(BinaryOp::Lt, std::move(lhs), additive(), l);
      } else if (accept_punct(">")) {
        lhs = Expr::make_binary(BinaryOp::Gt, std::move(lhs), additive(), l);
      } else {
        return lhs;
      }
    }
  }

  Expr additive() {
    Expr lhs = multiplicative();
    for (;;) {
      SourceLoc l = loc();
      if (accept_punct("+")) {
        lhs = Expr::make_binary(BinaryOp::Add, std::move(lhs), multiplicative(), l);
      } else if (accept_punct("-")) {
        lhs = Expr::make_binary(BinaryOp::Sub, std::move(lhs), multiplicative(), l);
      } else {
        return lhs;
      }
    }
  }

  Expr multiplicative() {
    Expr lhs = unary();
    while (peek_punct("*")) {
      SourceLoc l = loc();
      ++pos_;
      lhs = Expr::make_binary(BinaryOp::Mul, std::move(lhs), unary(), l);
    }
    return lhs;
  }

  Expr unary() {
    SourceLoc l = loc();
    if (accept_punct("!")) return Expr::make_unary(UnaryOp::Not, unary(), l);
    if (accept_punct("-")) {
      // Fold `-<literal>` so negative constants print and re-parse as literals.
      if (peek().kind == TokenKind::Int) return Expr::int_lit(-integer(), l);
      return Expr::make_unary(UnaryOp::Neg, unary(), l);
    }
    return primary();
  }

  Expr primary() {
    SourceLoc l = loc();
    if (peek().kind == TokenKind::Int) return Expr::int_lit(integer(), l);
    if (accept_kw("true")) return Expr::bool_lit(true, l);
    if (accept_kw("false")) return Expr::bool_lit(false, l);
    if (peek().kind == TokenKind::Ident) {
      if (peek_punct("(", 1))
        throw SyntaxError(
            Diagnostic{Diagnostic::Severity::Error, l.line, l.column,
                       "calls are only allowed as statements or as the whole right-hand side "
                       "of an assignment"},
            {"expression"});
      return Expr::ref(identifier(), l);
    }
    if (accept_punct("(")) {
      Expr e = expression();
      expect_punct(")");
      return e;
    }
    fail_expected({"expression"});
  }
};

}  // namespace

Program parse_syntax(std::string_view source) {
  Parser p(tokenize(source));
  Program prog = p.program();
  number_statements(prog);
  return prog;
}

Program parse(std::string_view source) {
  Program prog = parse_syntax(source);
  check_program(prog);
  return prog;
}

Expr parse_expression(std::string_view source) {
  Parser p(tokenize(source));
  return p.standalone_expression();
}

Program parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

}  // namespace violet::confscript
