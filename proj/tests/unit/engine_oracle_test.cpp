#include <gtest/gtest.h>

#include "oracle/concrete_interp.hpp"
#include "oracle/equivalence.hpp"
#include "test_support.hpp"
#include "violet/symexec/engine.hpp"

using namespace testing_support;
using violet::symexec::explore;

namespace {

void expect_equivalent(const std::string& file) {
  auto p = load(file);
  auto sym = all_globals(p);
  ASSERT_LE(oracle::domain_product(p, sym), 10000);
  auto result = explore(p, {}, sym, {});
  ASSERT_FALSE(result.exhausted) << result.exhausted_reason;
  auto runs = oracle::enumerate_runs(p, {}, sym);
  auto rep = oracle::check_equivalence(result, runs);
  for (const auto& problem : rep.problems) ADD_FAILURE() << file << ": " << problem;
  EXPECT_GE(rep.runs, rep.states);
}

}  // namespace

TEST(EngineOracle, Autocommit) { expect_equivalent("autocommit.cfs"); }
TEST(EngineOracle, AutocommitV2) { expect_equivalent("autocommit_v2.cfs"); }
TEST(EngineOracle, IoShape) { expect_equivalent("c6_io.cfs"); }
TEST(EngineOracle, RelaxedExterns) { expect_equivalent("externs_relaxed.cfs"); }
TEST(EngineOracle, Independent) { expect_equivalent("independent.cfs"); }
TEST(EngineOracle, Loops) { expect_equivalent("loops.cfs"); }
TEST(EngineOracle, NestedCalls) { expect_equivalent("nested_calls.cfs"); }
TEST(EngineOracle, Planner) { expect_equivalent("planner.cfs"); }
TEST(EngineOracle, QueryCache) { expect_equivalent("query_cache.cfs"); }
TEST(EngineOracle, Snippets) { expect_equivalent("snippets.cfs"); }

TEST(EngineOracle, ConcreteRunIsOneState) {
  auto p = load("autocommit.cfs");
  auto result = explore(p, {{"autocommit", 0}}, {}, {});
  ASSERT_EQ(result.states.size(), 1u);
  auto run = oracle::run_concrete(p, {{"autocommit", 0}, {"flush_at_trx_commit", 1},
                                      {"binlog_format", 0}, {"sql_command", 0}},
                                  {}, nullptr);
  EXPECT_EQ(result.states[0].cost, run.cost);
  EXPECT_EQ(result.states[0].decisions, run.decisions);
}

TEST(EngineOracle, PlainExternNarrows) {
  auto p = load("externs_plain.cfs");
  auto sym = all_globals(p);
  auto runs = oracle::enumerate_runs(p, {}, sym);
  bool narrowed = false;
  for (const auto& r : runs) narrowed = narrowed || r.run.narrowed;
  EXPECT_TRUE(narrowed);
  // Narrowing keeps one witness per call, so there are fewer states than
  // concrete paths.
  auto result = explore(p, {}, sym, {});
  std::set<std::vector<std::pair<int, bool>>> paths;
  for (const auto& r : runs) paths.insert(r.run.decisions);
  EXPECT_LT(result.states.size(), paths.size());
}

TEST(EngineOracle, PathsAreDisjoint) {
  for (const char* f : {"autocommit.cfs", "loops.cfs", "planner.cfs"}) {
    auto p = load(f);
    auto result = explore(p, {}, all_globals(p), {});
    std::set<std::vector<std::pair<int, bool>>> seen;
    for (const auto& s : result.states) EXPECT_TRUE(seen.insert(s.decisions).second) << f;
  }
}

// The comparison must notice a perturbed result, or the tests above prove
// nothing.
TEST(EngineOracle, DetectsPerturbedCost) {
  auto p = load("autocommit.cfs");
  auto sym = all_globals(p);
  auto result = explore(p, {}, sym, {});
  result.states[3].cost[violet::trace::Metric::Instructions] += 1;
  auto rep = oracle::check_equivalence(result, oracle::enumerate_runs(p, {}, sym));
  EXPECT_FALSE(rep.ok());
}

TEST(EngineOracle, DetectsDroppedState) {
  auto p = load("loops.cfs");
  auto sym = all_globals(p);
  auto result = explore(p, {}, sym, {});
  result.states.pop_back();
  auto rep = oracle::check_equivalence(result, oracle::enumerate_runs(p, {}, sym));
  EXPECT_FALSE(rep.ok());
}

TEST(EngineOracle, DetectsLooseConstraint) {
  auto p = load("planner.cfs");
  auto sym = all_globals(p);
  auto result = explore(p, {}, sym, {});
  std::erase_if(result.states[0].constraint.atoms, [](const violet::symexec::Atom& a) {
    return a.origin == violet::symexec::AtomOrigin::Branch;
  });
  auto rep = oracle::check_equivalence(result, oracle::enumerate_runs(p, {}, sym));
  EXPECT_FALSE(rep.ok());
}

TEST(EngineOracle, RunCounts) {
  auto p = load("autocommit.cfs");
  auto runs = oracle::enumerate_runs(p, {}, all_globals(p));
  // binlog_enabled is pure on a tainted argument: two returns per assignment.
  EXPECT_EQ(runs.size(), 2u * 3u * 3u * 3u * 2u);
  auto q = load("externs_relaxed.cfs");
  auto rq = oracle::enumerate_runs(q, {}, all_globals(q));
  EXPECT_GT(rq.size(), 3u * 3u);  // extern returns multiply the runs
}
