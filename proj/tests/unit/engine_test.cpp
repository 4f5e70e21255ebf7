#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>

#include "test_support.hpp"
#include "violet/error.hpp"
#include "violet/symexec/solver.hpp"
#include "violet/trace/state_trace.hpp"

using namespace violet;
using namespace violet::symexec;
using testing_support::all_globals;
using testing_support::corpus;
using testing_support::load;

namespace {

const char* kSmall = R"(
config autocommit: bool = true;
config flush: int in [0, 2] = 1;
input cmd: enum { INSERT, SELECT };
fn main() {
  trace_on();
  if (autocommit) { cost latency 10; }
  trace_off();
}
)";

std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(VIOLET_CORPUS_DIR))
    if (e.path().extension() == ".cfs") out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t count_origin(const ExecState& s, AtomOrigin o) {
  return static_cast<std::size_t>(std::count_if(s.constraint.atoms.begin(), s.constraint.atoms.end(),
                                                [&](const Atom& a) { return a.origin == o; }));
}

std::string fingerprint(const ExplorationResult& r) {
  std::string out;
  for (const auto& s : r.states) {
    out += std::to_string(s.id) + ":";
    for (const auto& a : s.constraint.atoms) out += to_text(*a.expr, r.variables) + ",";
    out += trace::to_string(s.cost) + "\n";
  }
  return out;
}

}  // namespace

TEST(Engine, MakeSymbolicSeedsOneDomainAtomPerTarget) {
  auto p = confscript::parse(kSmall);
  Engine e(p);
  auto one = e.make_symbolic(e.initial_state({}), {"autocommit"});
  EXPECT_EQ(one.constraint.atoms.size(), 1u);
  EXPECT_EQ(count_origin(one, AtomOrigin::Domain), 1u);
  EXPECT_FALSE(is_concrete(one.globals.at("autocommit")));
  EXPECT_TRUE(is_concrete(one.globals.at("flush")));

  Engine e3(p);
  auto three = e3.make_symbolic(e3.initial_state({}), {"autocommit", "flush", "cmd"});
  EXPECT_EQ(count_origin(three, AtomOrigin::Domain), 3u);
}

TEST(Engine, NoSymbolicNamesGivesOneState) {
  auto p = load("autocommit.cfs");
  auto r = explore(p, {}, {});
  ASSERT_EQ(r.states.size(), 1u);
  EXPECT_TRUE(r.states[0].constraint.decision_exprs().empty());
  EXPECT_FALSE(r.exhausted);
}

TEST(Engine, InitialConfigErrors) {
  auto p = load("autocommit.cfs");
  Engine e(p);
  EXPECT_THROW(e.initial_state({{"flush_at_trx_commit", 7}}), UnsatInitialConfig);
  EXPECT_THROW(e.initial_state({{"no_such_knob", 1}}), UnknownName);
  EXPECT_THROW(e.make_symbolic(e.initial_state({}), {"no_such_knob"}), UnknownName);
}

TEST(Engine, StateBudgetKeepsPartialResults) {
  auto p = load("autocommit.cfs");
  Budget b;
  b.max_states = 3;
  auto r = explore(p, {}, all_globals(p), b);
  EXPECT_TRUE(r.exhausted);
  EXPECT_FALSE(r.exhausted_reason.empty());
  EXPECT_GT(r.dropped_forks, 0);
  EXPECT_FALSE(r.states.empty());
  EXPECT_LE(static_cast<std::int64_t>(r.states.size()), b.max_states);
}

TEST(Engine, LatencyBudgetMarksStateAndKeepsConstraint) {
  auto p = load("autocommit.cfs");
  Budget b;
  b.max_latency = 1000;
  auto r = explore(p, {}, all_globals(p), b);
  bool saw = false;
  for (const auto& s : r.states) {
    if (s.status != StateStatus::BudgetExceeded) continue;
    saw = true;
    EXPECT_FALSE(s.constraint.decision_exprs().empty());
  }
  EXPECT_TRUE(saw);
}

TEST(Engine, ExplorationIsDeterministic) {
  for (const auto& f : corpus_files()) {
    auto p = load(f);
    auto a = explore(p, {}, all_globals(p));
    auto b = explore(p, {}, all_globals(p));
    EXPECT_EQ(fingerprint(a), fingerprint(b)) << f;
  }
}

TEST(Engine, EveryConstraintIsSatisfiable) {
  for (const auto& f : corpus_files()) {
    auto p = load(f);
    auto r = explore(p, {}, all_globals(p));
    Solver solver(r.variables);
    for (const auto& s : r.states)
      EXPECT_TRUE(solver.satisfiable(s.constraint.exprs())) << f << " state " << s.id;
  }
}

// --- externs and concretization ---

namespace {

ExplorationResult run_extern(const std::string& qualifier) {
  static std::vector<std::unique_ptr<confscript::Program>> keep;
  std::string src = "config x: int in [0, 10] = 5;\n" + qualifier +
                    " fn ext(n: int) -> int in [0, 3];\n"
                    "fn main() { trace_on(); let r = ext(x); trace_off(); }\n";
  keep.push_back(std::make_unique<confscript::Program>(confscript::parse(src)));
  return explore(*keep.back(), {}, {"x"});
}

}  // namespace

TEST(Extern, PureAndBenignLeaveConstraintUnchanged) {
  for (std::string q : {"extern pure", "extern benign"}) {
    auto r = run_extern(q);
    ASSERT_EQ(r.states.size(), 1u) << q;
    const auto& s = r.states[0];
    EXPECT_EQ(s.constraint.atoms.size(), 1u) << q;
    EXPECT_EQ(count_origin(s, AtomOrigin::Concretization), 0u) << q;
  }
}

TEST(Extern, PlainAppendsSmallestWitness) {
  auto r = run_extern("extern");
  ASSERT_EQ(r.states.size(), 1u);
  const auto& s = r.states[0];
  ASSERT_EQ(count_origin(s, AtomOrigin::Concretization), 1u);
  EXPECT_EQ(to_text(*s.constraint.atoms.back().expr, r.variables), "x==0");
  ASSERT_TRUE(is_concrete(s.globals.at("x")));
  EXPECT_EQ(s.globals.at("x")->value, 0);
}

TEST(Extern, PlainBindsEveryCopy) {
  auto p = confscript::parse(R"(
config x: int in [0, 10] = 5;
extern fn ext(n: int);
fn main() {
  trace_on();
  let y = x;
  let z = y;
  ext(x);
  if (z == 0) { cost latency 5; } else { cost latency 9; }
  trace_off();
}
)");
  auto r = explore(p, {}, {"x"});
  ASSERT_EQ(r.states.size(), 1u);
  EXPECT_EQ(r.states[0].cost.latency(), 5);
}

TEST(Extern, ConcretizeAllBindsSharedNode) {
  auto p = confscript::parse(kSmall);
  Engine e(p);
  auto s = e.make_symbolic(e.initial_state({}), {"flush"});
  auto node = s.globals.at("flush");
  e.concretize_all(s, node, 2);
  ASSERT_TRUE(is_concrete(s.globals.at("flush")));
  EXPECT_EQ(s.globals.at("flush")->value, 2);
}

// --- tracing windows ---

namespace {

ExplorationResult run_source(const std::string& src) {
  static std::vector<std::unique_ptr<confscript::Program>> keep;
  keep.push_back(std::make_unique<confscript::Program>(confscript::parse(src)));
  return explore(*keep.back(), {}, {});
}

}  // namespace

TEST(Window, CostBeforeTraceOnIsExcluded) {
  auto r = run_source("fn main() { cost latency 50; trace_on(); cost latency 7; trace_off(); }");
  ASSERT_EQ(r.states.size(), 1u);
  EXPECT_EQ(r.states[0].cost.latency(), 7);
}

TEST(Window, NeverStartedTraceIsEmpty) {
  auto r = run_source("fn main() { cost latency 5; cost syscalls 2; }");
  ASSERT_EQ(r.states.size(), 1u);
  EXPECT_TRUE(r.states[0].trace.events.empty());
  EXPECT_EQ(r.states[0].cost, trace::CostVector{});
}

TEST(Window, NoOpProgramHasZeroLatency) {
  auto r = run_source("fn main() { trace_on(); let a = 1; let b = 2; trace_off(); }");
  ASSERT_EQ(r.states.size(), 1u);
  const auto& c = r.states[0].cost;
  EXPECT_EQ(c.latency(), 0);
  // trace_on, the two lets, trace_off
  EXPECT_EQ(c[trace::Metric::Instructions], 4);
}

TEST(Window, SingleCallLatency) {
  auto r = run_source(R"(
fn main() { trace_on(); a(); trace_off(); }
fn a() { cost latency 7; }
)");
  auto t = trace::finalize_state_trace(r.states.at(0), r.addresses);
  auto it = std::find_if(t.calls.begin(), t.calls.end(),
                         [](const trace::CallNode& n) { return n.function == "a"; });
  ASSERT_NE(it, t.calls.end());
  EXPECT_EQ(it->latency, 7);
}

TEST(Window, NestedCallsLinkParent) {
  auto r = run_source(R"(
fn main() { trace_on(); a(); trace_off(); }
fn a() { cost latency 1; b(); }
fn b() { cost latency 3; }
)");
  auto t = trace::finalize_state_trace(r.states.at(0), r.addresses);
  std::map<std::string, const trace::CallNode*> by;
  for (const auto& n : t.calls) by[n.function] = &n;
  ASSERT_TRUE(by.count("a") && by.count("b"));
  EXPECT_EQ(by["b"]->call.parent_id, by["a"]->call.cid);
  EXPECT_EQ(by["a"]->latency, 4);
  EXPECT_EQ(by["b"]->latency, 3);
}

TEST(Window, SingleRecordHasNoParent) {
  auto r = run_source("fn main() { trace_on(); cost latency 2; trace_off(); }");
  auto t = trace::finalize_state_trace(r.states.at(0), r.addresses);
  ASSERT_EQ(t.calls.size(), 1u);
  EXPECT_FALSE(t.calls[0].call.parent_id.has_value());
}

TEST(Window, ChildrenNeverOutlastParentsOnCorpus) {
  for (const auto& f : corpus_files()) {
    auto p = load(f);
    auto r = explore(p, {}, all_globals(p));
    for (const auto& t : trace::finalize_all(r)) {
      std::map<int, std::int64_t> lat;
      for (const auto& n : t.calls) lat[n.call.cid] = n.latency;
      for (const auto& n : t.calls) {
        if (n.call.parent_id) {
          EXPECT_LE(n.latency, lat.at(*n.call.parent_id)) << f;
        }
        EXPECT_GE(n.self_latency, 0) << f;
      }
    }
  }
}

TEST(Window, MatchingIsABijectionOnCorpus) {
  for (const auto& f : corpus_files()) {
    auto p = load(f);
    auto r = explore(p, {}, all_globals(p));
    for (const auto& s : r.states) {
      if (s.status != StateStatus::Terminated) continue;
      auto calls = s.trace.calls();
      auto rets = s.trace.returns();
      auto m = trace::match_call_returns(calls, rets, s.trace.end_time);
      std::set<std::size_t> used;
      std::size_t matched = 0;
      for (const auto& mc : m) {
        if (!mc.ret) continue;
        ++matched;
        EXPECT_TRUE(used.insert(mc.ret->seq).second) << f;
      }
      EXPECT_EQ(matched, rets.size()) << f << " state " << s.id;
    }
  }
}
