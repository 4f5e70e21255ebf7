#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "violet/confscript/ast.hpp"
#include "violet/symexec/expr.hpp"
#include "violet/symexec/solver.hpp"
#include "violet/symexec/state.hpp"
#include "violet/trace/records.hpp"

namespace violet::symexec {

/// Concrete values by config or input name.
using ConcreteAssignment = std::map<std::string, std::int64_t>;

struct ExplorationResult {
  VariableTable variables;
  trace::AddressMap addresses;
  /// Terminal states ordered by id.
  std::vector<ExecState> states;
  /// Set when a budget cut exploration short (forks dropped, steps ran out).
  bool exhausted = false;
  std::string exhausted_reason;
  std::int64_t dropped_forks = 0;
  std::int64_t total_steps = 0;
};

/// Depth-first finite-domain symbolic executor over one program.
///
/// At a branch on a symbolic condition the current state follows the true
/// arm and a copy taking the false arm is queued (LIFO) with the next state
/// id. Only infeasible arms are pruned; when a single arm is feasible no atom
/// is added. The program must outlive the engine and every state it returns.
class Engine {
 public:
  explicit Engine(const confscript::Program& program, Budget budget = {},
                  std::uint64_t solver_max_product = Solver::kDefaultMaxProduct);

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  /// State at the entry point with every config concrete. Configs missing
  /// from `config` take their defaults; inputs take `config` values or the
  /// smallest domain value. Throws UnsatInitialConfig on out-of-domain values
  /// and UnknownName on names the program does not declare.
  ExecState initial_state(const ConcreteAssignment& config);

  /// Replaces each target's value with a fresh variable and seeds a domain
  /// atom for it. Throws UnknownName.
  ExecState make_symbolic(ExecState state, const std::set<std::string>& targets);

  /// Runs `initial` and every state forked from it to termination.
  std::vector<ExecState> explore(ExecState initial);

  /// Binds each symbolic argument to its smallest feasible value, appending
  /// `arg==w`; pure externs then drop those atoms and return a fresh
  /// variable, benign externs drop them, plain externs keep them and bind
  /// every location holding the same expression. Returns the call's value
  /// (nullptr when the extern declares no return domain).
  ExprPtr concretize_at_extern(ExecState& state, const confscript::FunctionDef& ext,
                               std::vector<ExprPtr>& args, int stmt);

  /// Binds every location holding `expr` to `value`.
  void concretize_all(ExecState& state, const ExprPtr& expr, std::int64_t value);

  const VariableTable& variables() const { return vars_; }
  const Solver& solver() const { return solver_; }
  const trace::AddressMap& addresses() const { return addr_; }
  const Budget& budget() const { return budget_; }
  bool exhausted() const { return exhausted_; }
  const std::string& exhausted_reason() const { return exhausted_reason_; }
  std::int64_t dropped_forks() const { return dropped_forks_; }
  std::int64_t total_steps() const { return total_steps_; }

 private:
  const confscript::Program& prog_;
  Budget budget_;
  VariableTable vars_;
  Solver solver_;
  trace::AddressMap addr_;

  int next_state_id_ = 1;
  std::int64_t states_created_ = 1;
  std::vector<ExecState> worklist_;
  bool exhausted_ = false;
  std::string exhausted_reason_;
  std::int64_t dropped_forks_ = 0;
  std::int64_t total_steps_ = 0;

  void step(ExecState& s);
  void end_of_block(ExecState& s);
  void exec_call(ExecState& s, const confscript::Stmt& st, const std::string& callee,
                 const std::vector<confscript::Expr>& args, std::optional<std::string> target,
                 bool declares);
  void return_from(ExecState& s, ExprPtr value);
  void loop_header(ExecState& s, const confscript::Stmt& st, std::int64_t iteration);
  void trace_on(ExecState& s);
  void trace_off(ExecState& s);
  void charge(ExecState& s, trace::Metric metric, std::int64_t amount);
  void terminate(ExecState& s, StateStatus status, std::string detail = {});
  void count_instruction(ExecState& s);

  template <typename Apply>
  bool decide(ExecState& s, const confscript::Stmt& st, const ExprPtr& cond, Apply&& apply);

  ExprPtr eval(const ExecState& s, const confscript::Expr& e) const;
  ExprPtr extern_call(ExecState& s, const confscript::FunctionDef& fn, std::vector<ExprPtr> args,
                      int stmt);
  ExprPtr fresh_return(ExecState& s, const confscript::FunctionDef& fn);
  void set_local(ExecState& s, std::size_t frame, const std::string& name, ExprPtr value);
  void set_location(ExecState& s, const Location& loc, ExprPtr value);
  std::uint64_t frame_return_address(const ExecState& s, std::size_t frame) const;
};

/// explore() with `symbolic` made symbolic on top of `config`.
ExplorationResult explore(const confscript::Program& program, const ConcreteAssignment& config,
                          const std::set<std::string>& symbolic, const Budget& budget = {});

}  // namespace violet::symexec
