#include "concrete_interp.hpp"

#include <stdexcept>

namespace oracle {

using namespace violet::confscript;
using violet::trace::Metric;

namespace {

struct Val {
  std::int64_t v = 0;
  bool taint = false;
};

struct Frame {
  std::map<std::string, Val> locals;
  const FunctionDef* fn = nullptr;
  int cid = 0;
};

enum class Flow { Next, Return };

class Interp {
 public:
  Interp(const Program& p, const Chooser& choose) : p_(p), choose_(choose) {}

  std::map<std::string, Val> globals;
  ConcreteRun run;

  void start() {
    const FunctionDef* entry = p_.find_function(p_.entry);
    if (!entry) throw std::runtime_error("no entry function");
    call(*entry, {});
  }

 private:
  const Program& p_;
  const Chooser& choose_;
  std::vector<Frame*> stack_;
  bool tracing_ = false;
  int next_cid_ = 1;
  std::map<std::string, int> fresh_;

  void tick() {
    if (tracing_) run.cost[Metric::Instructions] += 1;
  }

  Val eval(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::IntLit:
      case Expr::Kind::BoolLit:
        return {e.value, false};
      case Expr::Kind::Name: {
        auto& locals = stack_.back()->locals;
        if (auto it = locals.find(e.name); it != locals.end()) return it->second;
        if (auto it = globals.find(e.name); it != globals.end()) return it->second;
        if (auto m = p_.find_enum_member(e.name)) return {*m, false};
        throw std::runtime_error("unbound " + e.name);
      }
      case Expr::Kind::Unary: {
        Val a = eval(e.operands[0]);
        return {e.unary == UnaryOp::Neg ? -a.v : (a.v == 0 ? 1 : 0), a.taint};
      }
      case Expr::Kind::Binary: {
        Val a = eval(e.operands[0]);
        Val b = eval(e.operands[1]);
        std::int64_t r = 0;
        switch (e.binary) {
          case BinaryOp::Add: r = a.v + b.v; break;
          case BinaryOp::Sub: r = a.v - b.v; break;
          case BinaryOp::Mul: r = a.v * b.v; break;
          case BinaryOp::Eq: r = a.v == b.v; break;
          case BinaryOp::Ne: r = a.v != b.v; break;
          case BinaryOp::Lt: r = a.v < b.v; break;
          case BinaryOp::Le: r = a.v <= b.v; break;
          case BinaryOp::Gt: r = a.v > b.v; break;
          case BinaryOp::Ge: r = a.v >= b.v; break;
          case BinaryOp::And: r = a.v != 0 && b.v != 0; break;
          case BinaryOp::Or: r = a.v != 0 || b.v != 0; break;
        }
        return {r, a.taint || b.taint};
      }
    }
    throw std::runtime_error("bad expression");
  }

  Val call_extern(const FunctionDef& fn, const std::vector<Val>& args) {
    bool tainted = false;
    for (const auto& a : args) tainted = tainted || a.taint;
    Val lowest{fn.returns ? fn.returns->lo : 0, false};
    if (!tainted) return lowest;
    if (fn.is_pure && fn.returns) {
      auto key = fn.name + "#" + std::to_string(fresh_[fn.name]++);
      auto v = choose_(fn.name, *fn.returns);
      run.choices[key] = v;
      return {v, true};
    }
    if (!fn.is_pure && !fn.is_benign) run.narrowed = true;
    return lowest;
  }

  Val call(const FunctionDef& fn, std::vector<Val> args) {
    if (stack_.size() >= 256) throw std::runtime_error("call depth");
    Frame frame;
    frame.fn = &fn;
    for (std::size_t i = 0; i < fn.params.size(); ++i) frame.locals[fn.params[i].name] = args[i];
    if (tracing_) {
      frame.cid = next_cid_++;
      run.stack_parent[frame.cid] = stack_.empty() ? 0 : stack_.back()->cid;
      run.callee[frame.cid] = fn.name;
    }
    stack_.push_back(&frame);
    Val ret;
    block(fn.body, ret);
    stack_.pop_back();
    return ret;
  }

  Val invoke(const std::string& name, const std::vector<Expr>& arg_exprs) {
    const FunctionDef* fn = p_.find_function(name);
    if (!fn) throw std::runtime_error("unknown function " + name);
    std::vector<Val> args;
    for (const auto& a : arg_exprs) args.push_back(eval(a));
    return fn->is_extern ? call_extern(*fn, args) : call(*fn, std::move(args));
  }

  Flow block(const Block& b, Val& ret) {
    std::vector<std::string> declared;
    Flow flow = Flow::Next;
    for (const auto& s : b) {
      flow = stmt(s, ret, declared);
      if (flow == Flow::Return) break;
    }
    for (const auto& name : declared) stack_.back()->locals.erase(name);
    return flow;
  }

  Flow stmt(const Stmt& s, Val& ret, std::vector<std::string>& declared) {
    switch (s.kind) {
      case Stmt::Kind::Let:
      case Stmt::Kind::Assign: {
        tick();
        Val v = s.callee ? invoke(*s.callee, s.args) : eval(*s.expr);
        if (s.kind == Stmt::Kind::Let) declared.push_back(s.target);
        stack_.back()->locals[s.target] = v;
        return Flow::Next;
      }
      case Stmt::Kind::If: {
        tick();
        bool c = eval(*s.expr).v != 0;
        run.decisions.emplace_back(s.id, c);
        return block(c ? s.then_block : s.else_block, ret);
      }
      case Stmt::Kind::While: {
        tick();
        for (std::int64_t iter = 0; iter < s.bound; ++iter) {
          bool c = eval(*s.expr).v != 0;
          run.decisions.emplace_back(s.id, c);
          if (!c) break;
          if (block(s.then_block, ret) == Flow::Return) return Flow::Return;
          tick();
        }
        return Flow::Next;
      }
      case Stmt::Kind::Call:
        if (s.target == "trace_on") {
          if (!tracing_) {
            tracing_ = true;
            int parent = 0;
            for (std::size_t i = 0; i < stack_.size(); ++i) {
              stack_[i]->cid = next_cid_++;
              run.stack_parent[stack_[i]->cid] = parent;
              run.callee[stack_[i]->cid] = stack_[i]->fn->name;
              parent = stack_[i]->cid;
            }
          }
          tick();
          return Flow::Next;
        }
        if (s.target == "trace_off") {
          tick();
          tracing_ = false;
          for (auto* f : stack_) f->cid = 0;
          return Flow::Next;
        }
        tick();
        invoke(s.target, s.args);
        return Flow::Next;
      case Stmt::Kind::Cost: {
        tick();
        auto m = violet::trace::from_cost_metric(s.metric);
        if (tracing_) run.cost[m] += s.amount;
        if (m == Metric::Latency) run.clock += s.amount;
        return Flow::Next;
      }
      case Stmt::Kind::Return:
        tick();
        ret = s.expr ? eval(*s.expr) : Val{};
        return Flow::Return;
    }
    return Flow::Next;
  }
};

}  // namespace

ConcreteRun run_concrete(const Program& program, const std::map<std::string, std::int64_t>& globals,
                         const std::set<std::string>& tainted, const Chooser& choose) {
  Interp in(program, choose);
  for (const auto& [name, v] : globals) in.globals[name] = {v, tainted.count(name) > 0};
  in.start();
  return std::move(in.run);
}

std::int64_t domain_product(const Program& program, const std::set<std::string>& symbolic) {
  std::int64_t n = 1;
  for (const auto& name : symbolic)
    if (const auto* d = program.global_domain(name)) n *= d->size();
  return n;
}

std::vector<EnumeratedRun> enumerate_runs(const Program& program,
                                          const std::map<std::string, std::int64_t>& fixed,
                                          const std::set<std::string>& symbolic) {
  std::map<std::string, std::int64_t> base;
  std::vector<std::pair<std::string, const Domain*>> free;
  auto seed = [&](const std::string& name, const Domain& d, std::int64_t dflt) {
    auto it = fixed.find(name);
    base[name] = it != fixed.end() ? it->second : dflt;
    if (symbolic.count(name)) {
      base[name] = d.lo;
      free.emplace_back(name, &d);
    }
  };
  for (const auto& c : program.configs) seed(c.name, c.domain, c.default_value);
  for (const auto& i : program.inputs) seed(i.name, i.domain, i.domain.lo);

  std::vector<EnumeratedRun> out;
  auto assignment = base;
  for (;;) {
    // Every return sequence of the pure externs for this assignment.
    std::vector<std::int64_t> script;
    for (;;) {
      std::vector<const Domain*> points;
      Chooser choose = [&](const std::string&, const Domain& d) {
        std::size_t i = points.size();
        points.push_back(&d);
        if (i >= script.size()) script.push_back(d.lo);
        return script[i];
      };
      EnumeratedRun r;
      r.assignment = assignment;
      r.run = run_concrete(program, assignment, symbolic, choose);
      out.push_back(std::move(r));
      script.resize(points.size());
      while (!script.empty() && script.back() >= points[script.size() - 1]->hi) script.pop_back();
      if (script.empty()) break;
      ++script.back();
    }

    std::size_t k = 0;
    for (; k < free.size(); ++k) {
      auto& v = assignment[free[k].first];
      if (v < free[k].second->hi) {
        ++v;
        break;
      }
      v = free[k].second->lo;
    }
    if (k == free.size()) break;
  }
  return out;
}

}  // namespace oracle
