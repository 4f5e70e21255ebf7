#include "violet/symexec/engine.hpp"

#include <algorithm>

#include "violet/error.hpp"

namespace violet::symexec {

using confscript::Expr;
using confscript::FunctionDef;
using confscript::Stmt;
using trace::Metric;

const char* to_string(AtomOrigin o) {
  switch (o) {
    case AtomOrigin::Domain: return "domain";
    case AtomOrigin::Branch: return "branch";
    case AtomOrigin::Concretization: return "concretization";
  }
  return "?";
}

const char* to_string(StateStatus s) {
  switch (s) {
    case StateStatus::Running: return "running";
    case StateStatus::Terminated: return "terminated";
    case StateStatus::BudgetExceeded: return "budget-exceeded";
  }
  return "?";
}

std::vector<ExprPtr> PathConstraint::exprs() const {
  std::vector<ExprPtr> out;
  for (const auto& a : atoms) out.push_back(a.expr);
  return out;
}

std::vector<ExprPtr> PathConstraint::decision_exprs() const {
  std::vector<ExprPtr> out;
  for (const auto& a : atoms)
    if (a.origin != AtomOrigin::Domain) out.push_back(a.expr);
  return out;
}

// ---------------------------------------------------------------------------
// TaintMap

void TaintMap::write(const Location& loc, const ExprPtr& value) {
  erase(loc);
  if (!value || is_concrete(value)) return;
  by_loc_[loc] = value.get();
  by_expr_[value.get()].insert(loc);
}

void TaintMap::erase(const Location& loc) {
  auto it = by_loc_.find(loc);
  if (it == by_loc_.end()) return;
  auto& locs = by_expr_[it->second];
  locs.erase(loc);
  if (locs.empty()) by_expr_.erase(it->second);
  by_loc_.erase(it);
}

void TaintMap::erase_frames_from(int frame) {
  std::vector<Location> gone;
  for (const auto& [loc, node] : by_loc_)
    if (loc.frame >= frame) gone.push_back(loc);
  for (const auto& loc : gone) erase(loc);
}

std::vector<Location> TaintMap::holders(const ExprNode* node) const {
  auto it = by_expr_.find(node);
  if (it == by_expr_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

// ---------------------------------------------------------------------------
// Engine

namespace {
bool is_builtin(const std::string& name) { return name == "trace_on" || name == "trace_off"; }

ExprPtr domain_atom(VarId v, const Domain& d) {
  return binary(Op::And, binary(Op::Ge, variable(v), constant(d.lo)),
                binary(Op::Le, variable(v), constant(d.hi)));
}
}  // namespace

Engine::Engine(const confscript::Program& program, Budget budget, std::uint64_t solver_max_product)
    : prog_(program), budget_(budget), solver_(vars_, solver_max_product), addr_(program) {}

ExecState Engine::initial_state(const ConcreteAssignment& config) {
  for (const auto& [name, value] : config)
    if (!prog_.global_domain(name)) throw UnknownName("'" + name + "' is not a config or input");

  ExecState s;
  s.id = 0;
  for (const auto& c : prog_.configs) {
    auto it = config.find(c.name);
    std::int64_t v = it == config.end() ? c.default_value : it->second;
    if (!c.domain.contains(v))
      throw UnsatInitialConfig("config '" + c.name + "' = " + std::to_string(v) +
                               " is outside " + c.domain.to_string());
    s.globals[c.name] = constant(v);
  }
  for (const auto& in : prog_.inputs) {
    auto it = config.find(in.name);
    std::int64_t v = it == config.end() ? in.domain.value_at(0) : it->second;
    if (!in.domain.contains(v))
      throw UnsatInitialConfig("input '" + in.name + "' = " + std::to_string(v) + " is outside " +
                               in.domain.to_string());
    s.globals[in.name] = constant(v);
  }
  const FunctionDef* entry = prog_.find_function(prog_.entry);
  if (!entry) throw UnknownName("no entry function '" + prog_.entry + "'");
  Frame f;
  f.fn = entry;
  f.cursors.push_back(Cursor{&entry->body});
  s.frames.push_back(std::move(f));
  return s;
}

ExecState Engine::make_symbolic(ExecState s, const std::set<std::string>& targets) {
  for (const auto& t : targets)
    if (!prog_.global_domain(t)) throw UnknownName("cannot make '" + t + "' symbolic: not declared");
  auto seed = [&](const std::string& name, VarKind kind, const Domain& d) {
    if (!targets.count(name)) return;
    VarId id = vars_.add(name, kind, d);
    ExprPtr v = variable(id);
    s.globals[name] = v;
    s.taint.write({-1, name}, v);
    s.constraint.add(domain_atom(id, d), AtomOrigin::Domain);
  };
  for (const auto& c : prog_.configs) seed(c.name, VarKind::Config, c.domain);
  for (const auto& in : prog_.inputs) seed(in.name, VarKind::Input, in.domain);
  return s;
}

std::vector<ExecState> Engine::explore(ExecState initial) {
  std::vector<ExecState> done;
  next_state_id_ = initial.id + 1;
  states_created_ = 1;
  worklist_.clear();
  worklist_.push_back(std::move(initial));
  while (!worklist_.empty()) {
    ExecState s = std::move(worklist_.back());
    worklist_.pop_back();
    if (total_steps_ >= budget_.max_steps) {
      terminate(s, StateStatus::BudgetExceeded, "not explored: step budget exhausted");
    }
    while (s.running()) step(s);
    done.push_back(std::move(s));
  }
  std::sort(done.begin(), done.end(),
            [](const ExecState& a, const ExecState& b) { return a.id < b.id; });
  return done;
}

ExprPtr Engine::eval(const ExecState& s, const Expr& e) const {
  switch (e.kind) {
    case Expr::Kind::IntLit:
    case Expr::Kind::BoolLit:
      return constant(e.value);
    case Expr::Kind::Name: {
      const auto& locals = s.frames.back().locals;
      if (auto it = locals.find(e.name); it != locals.end()) return it->second;
      if (auto it = s.globals.find(e.name); it != s.globals.end()) return it->second;
      if (auto m = prog_.find_enum_member(e.name)) return constant(*m);
      throw RuntimeFault("unbound name '" + e.name + "'");
    }
    case Expr::Kind::Unary:
      return unary(e.unary == confscript::UnaryOp::Neg ? Op::Neg : Op::Not,
                   eval(s, e.operands[0]));
    case Expr::Kind::Binary: {
      Op op = Op::Add;
      switch (e.binary) {
        case confscript::BinaryOp::Add: op = Op::Add; break;
        case confscript::BinaryOp::Sub: op = Op::Sub; break;
        case confscript::BinaryOp::Mul: op = Op::Mul; break;
        case confscript::BinaryOp::Eq: op = Op::Eq; break;
        case confscript::BinaryOp::Ne: op = Op::Ne; break;
        case confscript::BinaryOp::Lt: op = Op::Lt; break;
        case confscript::BinaryOp::Le: op = Op::Le; break;
        case confscript::BinaryOp::Gt: op = Op::Gt; break;
        case confscript::BinaryOp::Ge: op = Op::Ge; break;
        case confscript::BinaryOp::And: op = Op::And; break;
        case confscript::BinaryOp::Or: op = Op::Or; break;
      }
      return binary(op, eval(s, e.operands[0]), eval(s, e.operands[1]));
    }
  }
  throw RuntimeFault("unknown expression");
}

void Engine::set_location(ExecState& s, const Location& loc, ExprPtr value) {
  s.taint.write(loc, value);
  if (loc.frame < 0)
    s.globals[loc.name] = std::move(value);
  else
    s.frames[static_cast<std::size_t>(loc.frame)].locals[loc.name] = std::move(value);
}

void Engine::set_local(ExecState& s, std::size_t frame, const std::string& name, ExprPtr value) {
  set_location(s, {static_cast<int>(frame), name}, std::move(value));
}

void Engine::count_instruction(ExecState& s) {
  ++s.steps;
  ++total_steps_;
  if (s.tracing) {
    s.cost[Metric::Instructions] += 1;
    ++s.window_instructions;
  }
}

void Engine::terminate(ExecState& s, StateStatus status, std::string detail) {
  if (s.tracing) {
    s.trace.events.push_back(
        trace::MetricRecord{Metric::Instructions, s.window_instructions, s.clock});
    s.window_instructions = 0;
  }
  s.status = status;
  s.status_detail = std::move(detail);
  s.trace.end_time = s.clock;
}

void Engine::charge(ExecState& s, Metric metric, std::int64_t amount) {
  if (s.tracing) {
    s.cost[metric] += amount;
    s.trace.events.push_back(trace::MetricRecord{metric, amount, s.clock});
  }
  if (metric == Metric::Latency) s.clock += amount;
}

std::uint64_t Engine::frame_return_address(const ExecState& s, std::size_t frame) const {
  return frame == 0 ? 0 : addr_.return_address(s.frames[frame].callsite);
}

void Engine::trace_on(ExecState& s) {
  if (s.tracing) return;
  s.tracing = true;
  s.window_instructions = 0;
  for (std::size_t i = 0; i < s.frames.size(); ++i) {
    auto& f = s.frames[i];
    f.cid = s.next_cid++;
    s.trace.events.push_back(trace::CallRecord{f.cid, addr_.entry_of(f.fn->name),
                                               frame_return_address(s, i), s.clock, 0, {}, 0});
    s.stack_parent[f.cid] = i == 0 ? 0 : s.frames[i - 1].cid;
  }
}

void Engine::trace_off(ExecState& s) {
  if (!s.tracing) return;
  s.trace.events.push_back(trace::MetricRecord{Metric::Instructions, s.window_instructions, s.clock});
  s.window_instructions = 0;
  for (std::size_t i = s.frames.size(); i-- > 0;) {
    s.trace.events.push_back(trace::ReturnRecord{frame_return_address(s, i), s.clock, 0, 0});
    s.frames[i].cid = 0;
  }
  s.tracing = false;
}

template <typename Apply>
bool Engine::decide(ExecState& s, const Stmt& st, const ExprPtr& cond, Apply&& apply) {
  if (is_concrete(cond)) {
    bool outcome = cond->value != 0;
    s.decisions.emplace_back(st.id, outcome);
    apply(s, outcome);
    return outcome;
  }
  auto t_atoms = branch_atoms(cond, true);
  auto f_atoms = branch_atoms(cond, false);
  auto base = s.constraint.exprs();
  bool t_ok = solver_.feasible_with(base, t_atoms);
  bool f_ok = solver_.feasible_with(base, f_atoms);
  if (!t_ok && !f_ok)
    throw UnsatState("state " + std::to_string(s.id) + ": neither arm of statement " +
                     std::to_string(st.id) + " is feasible");
  bool outcome = t_ok;
  if (t_ok && f_ok) {
    if (states_created_ >= budget_.max_states) {
      ++dropped_forks_;
      if (!exhausted_) {
        exhausted_ = true;
        exhausted_reason_ = "state budget of " + std::to_string(budget_.max_states) + " reached";
      }
    } else {
      ++states_created_;
      ExecState other = s;
      other.id = next_state_id_++;
      for (const auto& a : f_atoms) other.constraint.add(a, AtomOrigin::Branch, st.id);
      other.decisions.emplace_back(st.id, false);
      apply(other, false);
      worklist_.push_back(std::move(other));
    }
    for (const auto& a : t_atoms) s.constraint.add(a, AtomOrigin::Branch, st.id);
  }
  s.decisions.emplace_back(st.id, outcome);
  apply(s, outcome);
  return outcome;
}

void Engine::step(ExecState& s) {
  if (total_steps_ >= budget_.max_steps) {
    exhausted_ = true;
    if (exhausted_reason_.empty())
      exhausted_reason_ = "step budget of " + std::to_string(budget_.max_steps) + " reached";
    terminate(s, StateStatus::BudgetExceeded, "step budget exhausted");
    return;
  }
  Frame& f = s.frames.back();
  if (f.cursors.empty()) {
    return_from(s, nullptr);
    return;
  }
  Cursor& c = f.cursors.back();
  if (c.pos >= c.block->size()) {
    end_of_block(s);
    return;
  }
  const Stmt& st = (*c.block)[c.pos];
  count_instruction(s);
  const std::size_t fi = s.frames.size() - 1;

  switch (st.kind) {
    case Stmt::Kind::Let:
    case Stmt::Kind::Assign: {
      bool declares = st.kind == Stmt::Kind::Let;
      if (st.callee) {
        exec_call(s, st, *st.callee, st.args, st.target, declares);
        return;
      }
      ExprPtr v = eval(s, *st.expr);
      if (declares) c.declared.push_back(st.target);
      set_local(s, fi, st.target, std::move(v));
      ++s.frames[fi].cursors.back().pos;
      return;
    }
    case Stmt::Kind::If: {
      ExprPtr cond = eval(s, *st.expr);
      decide(s, st, cond, [&st](ExecState& t, bool outcome) {
        t.frames.back().cursors.push_back(Cursor{outcome ? &st.then_block : &st.else_block});
      });
      return;
    }
    case Stmt::Kind::While:
      loop_header(s, st, 0);
      return;
    case Stmt::Kind::Call:
      if (st.target == "trace_on") {
        // Counted after tracing starts so the call is part of its window.
        bool was_tracing = s.tracing;
        trace_on(s);
        if (!was_tracing) {
          s.cost[Metric::Instructions] += 1;
          ++s.window_instructions;
        }
        ++c.pos;
        return;
      }
      if (st.target == "trace_off") {
        trace_off(s);
        ++c.pos;
        return;
      }
      exec_call(s, st, st.target, st.args, std::nullopt, false);
      return;
    case Stmt::Kind::Cost:
      charge(s, trace::from_cost_metric(st.metric), st.amount);
      ++c.pos;
      if (s.clock > budget_.max_latency)
        terminate(s, StateStatus::BudgetExceeded,
                  "virtual clock passed " + std::to_string(budget_.max_latency));
      return;
    case Stmt::Kind::Return:
      return_from(s, st.expr ? eval(s, *st.expr) : nullptr);
      return;
  }
}

void Engine::end_of_block(ExecState& s) {
  const std::size_t fi = s.frames.size() - 1;
  Frame& f = s.frames[fi];
  Cursor done = std::move(f.cursors.back());
  f.cursors.pop_back();
  for (const auto& name : done.declared) {
    f.locals.erase(name);
    s.taint.erase({static_cast<int>(fi), name});
  }
  if (f.cursors.empty()) {
    return_from(s, nullptr);
    return;
  }
  if (done.loop) {
    count_instruction(s);
    loop_header(s, *done.loop, done.iteration);
    return;
  }
  ++f.cursors.back().pos;  // past the If that opened the block
}

void Engine::loop_header(ExecState& s, const Stmt& st, std::int64_t iteration) {
  auto leave = [](ExecState& t) { ++t.frames.back().cursors.back().pos; };
  if (iteration >= st.bound) {
    leave(s);
    return;
  }
  ExprPtr cond = eval(s, *st.expr);
  decide(s, st, cond, [&](ExecState& t, bool outcome) {
    if (outcome) {
      Cursor body{&st.then_block};
      body.loop = &st;
      body.iteration = iteration + 1;
      t.frames.back().cursors.push_back(std::move(body));
    } else {
      leave(t);
    }
  });
}

void Engine::exec_call(ExecState& s, const Stmt& st, const std::string& callee,
                       const std::vector<Expr>& args, std::optional<std::string> target,
                       bool declares) {
  const FunctionDef* fn = prog_.find_function(callee);
  if (!fn || is_builtin(callee)) throw RuntimeFault("call to unknown function '" + callee + "'");
  std::vector<ExprPtr> argv;
  for (const auto& a : args) argv.push_back(eval(s, a));

  const std::size_t fi = s.frames.size() - 1;
  if (fn->is_extern) {
    ExprPtr ret = extern_call(s, *fn, std::move(argv), st.id);
    if (target) {
      if (declares) s.frames[fi].cursors.back().declared.push_back(*target);
      set_local(s, fi, *target, ret ? ret : constant(0));
    }
    ++s.frames[fi].cursors.back().pos;
    return;
  }
  if (static_cast<std::int64_t>(s.frames.size()) >= budget_.max_call_depth) {
    terminate(s, StateStatus::BudgetExceeded,
              "call depth passed " + std::to_string(budget_.max_call_depth));
    return;
  }

  Frame nf;
  nf.fn = fn;
  nf.callsite = st.id;
  nf.result_target = std::move(target);
  nf.result_declares = declares;
  nf.cursors.push_back(Cursor{&fn->body});
  s.frames.push_back(std::move(nf));
  const std::size_t ni = s.frames.size() - 1;
  for (std::size_t i = 0; i < fn->params.size(); ++i)
    set_local(s, ni, fn->params[i].name, argv[i]);

  if (s.tracing) {
    int cid = s.next_cid++;
    s.frames[ni].cid = cid;
    s.trace.events.push_back(trace::CallRecord{cid, addr_.entry_of(fn->name),
                                               addr_.return_address(st.id), s.clock, 0, {}, 0});
    s.stack_parent[cid] = s.frames[fi].cid;
  }
}

void Engine::return_from(ExecState& s, ExprPtr value) {
  const std::size_t fi = s.frames.size() - 1;
  if (s.tracing && s.frames[fi].cid != 0)
    s.trace.events.push_back(trace::ReturnRecord{frame_return_address(s, fi), s.clock, 0, 0});
  Frame done = std::move(s.frames.back());
  s.frames.pop_back();
  s.taint.erase_frames_from(static_cast<int>(fi));
  if (s.frames.empty()) {
    terminate(s, StateStatus::Terminated);
    return;
  }
  const std::size_t ci = s.frames.size() - 1;
  auto& cursor = s.frames[ci].cursors.back();
  if (done.result_target) {
    if (done.result_declares) cursor.declared.push_back(*done.result_target);
    set_local(s, ci, *done.result_target, value ? value : constant(0));
  }
  ++s.frames[ci].cursors.back().pos;
}

ExprPtr Engine::fresh_return(ExecState& s, const FunctionDef& fn) {
  int k = s.fresh_counter[fn.name]++;
  VarId id = vars_.add(fn.name + "#" + std::to_string(k), VarKind::Internal, *fn.returns);
  s.internal_vars.push_back(id);
  return variable(id);
}

ExprPtr Engine::extern_call(ExecState& s, const FunctionDef& fn, std::vector<ExprPtr> args,
                            int stmt) {
  bool symbolic = std::any_of(args.begin(), args.end(),
                              [](const ExprPtr& a) { return !is_concrete(a); });
  if (!symbolic) return fn.returns ? constant(fn.returns->value_at(0)) : nullptr;
  return concretize_at_extern(s, fn, args, stmt);
}

ExprPtr Engine::concretize_at_extern(ExecState& s, const FunctionDef& ext,
                                     std::vector<ExprPtr>& args, int stmt) {
  const std::size_t before = s.constraint.atoms.size();
  std::vector<std::pair<ExprPtr, std::int64_t>> bound;
  for (auto& a : args) {
    if (is_concrete(a)) continue;
    auto w = solver_.minimum(s.constraint.exprs(), a);
    if (!w)
      throw UnsatState("state " + std::to_string(s.id) + ": no witness for argument of '" +
                       ext.name + "'");
    s.constraint.add(binary(Op::Eq, a, constant(*w)), AtomOrigin::Concretization, stmt);
    bound.emplace_back(a, *w);
    a = constant(*w);
  }
  if (ext.is_pure || ext.is_benign) {
    // Relaxation: the call has no side effect on program state.
    s.constraint.atoms.resize(before);
    if (ext.is_pure && ext.returns) return fresh_return(s, ext);
  } else {
    for (const auto& [expr, w] : bound) concretize_all(s, expr, w);
  }
  return ext.returns ? constant(ext.returns->value_at(0)) : nullptr;
}

void Engine::concretize_all(ExecState& s, const ExprPtr& expr, std::int64_t value) {
  ExprPtr c = constant(value);
  for (const auto& loc : s.taint.holders(expr.get())) set_location(s, loc, c);
}

ExplorationResult explore(const confscript::Program& program, const ConcreteAssignment& config,
                          const std::set<std::string>& symbolic, const Budget& budget) {
  Engine engine(program, budget);
  ExecState init = engine.make_symbolic(engine.initial_state(config), symbolic);
  ExplorationResult r;
  r.states = engine.explore(std::move(init));
  r.variables = engine.variables();
  r.addresses = engine.addresses();
  r.exhausted = engine.exhausted();
  r.exhausted_reason = engine.exhausted_reason();
  r.dropped_forks = engine.dropped_forks();
  r.total_steps = engine.total_steps();
  return r;
}

}  // namespace violet::symexec
