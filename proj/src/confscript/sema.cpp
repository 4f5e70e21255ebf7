#include <map>
#include <set>

#include "violet/confscript/parser.hpp"

namespace violet::confscript {

namespace {

bool is_builtin(std::string_view name) { return name == "trace_on" || name == "trace_off"; }

class Checker {
 public:
  explicit Checker(const Program& p) : prog_(p) {}

  std::vector<Diagnostic> run() {
    globals();
    for (const auto& f : prog_.functions) function(f);
    entry();
    return std::move(diags_);
  }

 private:
  const Program& prog_;
  std::vector<Diagnostic> diags_;
  std::set<std::string> global_names_;
  std::map<std::string, std::int64_t> members_;

  void error(SourceLoc loc, std::string msg) {
    diags_.push_back(Diagnostic{Diagnostic::Severity::Error, loc.line, loc.column, std::move(msg)});
  }

  void check_domain(const Domain& d, SourceLoc loc, const std::string& what, bool allow_unbounded) {
    switch (d.kind) {
      case Domain::Kind::Int:
        if (d.lo > d.hi) {
          error(loc, what + " has an empty domain [" + std::to_string(d.lo) + ", " +
                         std::to_string(d.hi) + "]");
        } else if (d.size() > kMaxIntDomain || d.size() <= 0) {
          error(loc, what + " domain has more than " + std::to_string(kMaxIntDomain) + " values");
        }
        break;
      case Domain::Kind::Enum: {
        if (d.members.empty()) error(loc, what + " enum must have at least one member");
        std::set<std::string> seen;
        for (std::size_t i = 0; i < d.members.size(); ++i) {
          const auto& m = d.members[i];
          if (!seen.insert(m).second) error(loc, "duplicate enum member '" + m + "'");
          auto [it, fresh] = members_.emplace(m, static_cast<std::int64_t>(i));
          if (!fresh && it->second != static_cast<std::int64_t>(i))
            error(loc, "enum member '" + m + "' is declared with a different position elsewhere");
        }
        break;
      }
      case Domain::Kind::Unbounded:
        if (!allow_unbounded) error(loc, what + " needs a bounded domain (`int in [lo, hi]`)");
        break;
      case Domain::Kind::Bool:
        break;
    }
  }

  void declare_global(const std::string& name, SourceLoc loc) {
    if (name.find('#') != std::string::npos) error(loc, "'" + name + "' is not a valid name");
    if (is_builtin(name)) error(loc, "'" + name + "' is a builtin");
    if (!global_names_.insert(name).second) error(loc, "duplicate declaration of '" + name + "'");
  }

  void globals() {
    for (const auto& c : prog_.configs) {
      declare_global(c.name, c.loc);
      check_domain(c.domain, c.loc, "config '" + c.name + "'", false);
      if (c.domain.finite() && c.domain.size() > 0 && !c.domain.contains(c.default_value))
        error(c.loc, "default of config '" + c.name + "' lies outside " + c.domain.to_string());
    }
    for (const auto& in : prog_.inputs) {
      declare_global(in.name, in.loc);
      check_domain(in.domain, in.loc, "input '" + in.name + "'", false);
    }
    for (const auto& f : prog_.functions) {
      declare_global(f.name, f.loc);
      for (const auto& p : f.params) check_domain(p.domain, f.loc, "parameter '" + p.name + "'", true);
      if (f.returns) check_domain(*f.returns, f.loc, "return of '" + f.name + "'", false);
    }
    for (const auto& [m, idx] : members_) {
      (void)idx;
      if (global_names_.count(m)) error({}, "enum member '" + m + "' clashes with a declaration");
    }
  }

  void entry() {
    const FunctionDef* main = prog_.find_function(prog_.entry);
    if (!main) {
      error({}, "no entry function '" + prog_.entry + "'");
      return;
    }
    if (main->is_extern) error(main->loc, "entry function must have a body");
    if (!main->params.empty()) error(main->loc, "entry function takes no parameters");
  }

  // Lexical scopes of locals within one function.
  struct Scope {
    std::vector<std::set<std::string>> frames;
    std::set<std::string> all;  // every local ever declared in the function
    bool visible(const std::string& n) const {
      for (const auto& f : frames)
        if (f.count(n)) return true;
      return false;
    }
  };

  bool resolves_global(const std::string& n) const {
    return prog_.find_config(n) || prog_.find_input(n) || members_.count(n);
  }

  void expr(const Expr& e, const Scope& scope) {
    for_each_name(e, [&](const Expr& n) {
      if (!scope.visible(n.name) && !resolves_global(n.name))
        error(n.loc, "undeclared name '" + n.name + "'");
    });
  }

  void call(const std::string& callee, const std::vector<Expr>& args, SourceLoc loc,
            const Scope& scope, bool wants_value) {
    for (const auto& a : args) expr(a, scope);
    if (is_builtin(callee)) {
      if (!args.empty()) error(loc, "'" + callee + "' takes no arguments");
      if (wants_value) error(loc, "'" + callee + "' does not return a value");
      return;
    }
    const FunctionDef* f = prog_.find_function(callee);
    if (!f) {
      error(loc, "call to undeclared function '" + callee + "'");
      return;
    }
    if (f->name == prog_.entry) error(loc, "the entry function cannot be called");
    if (f->params.size() != args.size())
      error(loc, "'" + callee + "' expects " + std::to_string(f->params.size()) + " argument(s), got " +
                     std::to_string(args.size()));
  }

  void declare_local(const std::string& name, SourceLoc loc, Scope& scope) {
    if (name.find('#') != std::string::npos) error(loc, "'" + name + "' is not a valid name");
    if (global_names_.count(name) || members_.count(name)) {
      error(loc, "local '" + name + "' shadows a global declaration");
    } else if (!scope.all.insert(name).second) {
      error(loc, "local '" + name + "' is already declared in this function");
    }
    scope.frames.back().insert(name);
  }

  void block(const Block& b, Scope& scope) {
    scope.frames.emplace_back();
    for (const auto& s : b) statement(s, scope);
    scope.frames.pop_back();
  }

  void statement(const Stmt& s, Scope& scope) {
    switch (s.kind) {
      case Stmt::Kind::Let:
      case Stmt::Kind::Assign:
        if (s.callee) {
          call(*s.callee, s.args, s.loc, scope, true);
        } else if (s.expr) {
          expr(*s.expr, scope);
        }
        if (s.kind == Stmt::Kind::Let) {
          declare_local(s.target, s.loc, scope);
        } else if (!scope.visible(s.target)) {
          if (resolves_global(s.target)) {
            error(s.loc, "cannot assign to '" + s.target + "' (only locals are assignable)");
          } else {
            error(s.loc, "assignment to undeclared local '" + s.target + "'");
          }
        }
        break;
      case Stmt::Kind::If:
        expr(*s.expr, scope);
        block(s.then_block, scope);
        block(s.else_block, scope);
        break;
      case Stmt::Kind::While:
        expr(*s.expr, scope);
        if (s.bound <= 0) error(s.loc, "loop bound must be a positive integer");
        block(s.then_block, scope);
        break;
      case Stmt::Kind::Call:
        call(s.target, s.args, s.loc, scope, false);
        break;
      case Stmt::Kind::Cost:
        if (s.amount < 0) error(s.loc, "cost amount must be non-negative");
        break;
      case Stmt::Kind::Return:
        if (s.expr) expr(*s.expr, scope);
        break;
    }
  }

  void function(const FunctionDef& f) {
    if ((f.is_pure || f.is_benign) && !f.is_extern)
      error(f.loc, "'pure'/'benign' are only valid on extern functions");
    if (f.is_pure && f.is_benign) error(f.loc, "an extern cannot be both pure and benign");
    if (f.returns && !f.is_extern)
      error(f.loc, "return domains are only declared on extern functions");
    Scope scope;
    scope.frames.emplace_back();
    for (const auto& p : f.params) declare_local(p.name, f.loc, scope);
    block(f.body, scope);
  }
};

}  // namespace

void check_program(const Program& program) {
  auto diags = Checker(program).run();
  if (!diags.empty()) throw SemanticError(std::move(diags));
}

}  // namespace violet::confscript
