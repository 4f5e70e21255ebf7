#include <gtest/gtest.h>

#include <random>

#include "oracle/path_enum.hpp"
#include "test_support.hpp"
#include "violet/analysis/control_dep.hpp"
#include "violet/analysis/postdom.hpp"
#include "violet/analysis/related.hpp"
#include "violet/confscript/cfg.hpp"
#include "violet/error.hpp"

using namespace violet;
using namespace violet::analysis;
using namespace testing_support;

namespace {

/// Id of the If in `fn` whose condition is the bare name `cond`.
int if_on(const confscript::Program& p, const std::string& fn, const std::string& cond,
          int nth = 0) {
  int found = -1;
  confscript::for_each_stmt(p.find_function(fn)->body, [&](const confscript::Stmt& s) {
    if (found < 0 && s.kind == confscript::Stmt::Kind::If && s.expr->kind == confscript::Expr::Kind::Name &&
        s.expr->name == cond && nth-- == 0)
      found = s.id;
  });
  return found;
}

}  // namespace

TEST(PostDom, RandomGraphsMatchPathEnumeration) {
  std::mt19937_64 rng(7);
  for (int g = 0; g < 100; ++g) {
    auto graph = oracle::random_cfg(rng, 16);
    PostDominatorTree pdt(graph);
    for (int a = 0; a < graph.size(); ++a)
      for (int b = 0; b < graph.size(); ++b)
        ASSERT_EQ(pdt.postdominates(b, a), oracle::postdominates_by_paths(graph, b, a))
            << "graph " << g << " b=" << b << " a=" << a;
  }
}

TEST(PostDom, CorpusCfgsMatchPathEnumeration) {
  for (const char* f : {"autocommit.cfs", "loops.cfs", "nested_calls.cfs", "snippets.cfs"}) {
    auto p = load(f);
    for (const auto& [name, cfg] : confscript::lower_to_cfg(p)) {
      PostDominatorTree pdt(cfg.graph);
      for (int a = 0; a < cfg.graph.size(); ++a)
        for (int b = 0; b < cfg.graph.size(); ++b)
          EXPECT_EQ(pdt.postdominates(b, a), oracle::postdominates_by_paths(cfg.graph, b, a))
              << f << ":" << name;
    }
  }
}

TEST(PostDom, ExitPostdominatesReachingNodes) {
  confscript::Digraph g;
  g.succ = {{1, 2}, {3}, {3}, {}, {4}};  // node 4 spins forever
  g.entry = 0;
  g.exit = 3;
  PostDominatorTree pdt(g);
  EXPECT_EQ(pdt.immediate_postdominator(0), 3);
  EXPECT_EQ(pdt.immediate_postdominator(1), 3);
  EXPECT_FALSE(pdt.reaches_exit(4));
  EXPECT_TRUE(pdt.postdominates(1, 4));  // vacuous
  EXPECT_FALSE(pdt.postdominates(1, 0));
}

TEST(ControlDep, NestedIfIsClassic) {
  auto p = load("snippets.cfs");
  ControlDependence cd(*p.find_function("nested"));
  int a = if_on(p, "nested", "a");
  int d = if_on(p, "nested", "d");
  EXPECT_TRUE(cd.classic(d, a));
  EXPECT_FALSE(cd.classic(a, d));
  EXPECT_TRUE(cd.depends(d, a));
}

TEST(ControlDep, ElseIfChainLinksEveryTest) {
  auto p = load("snippets.cfs");
  ControlDependence cd(*p.find_function("chain"));
  int a = if_on(p, "chain", "a");
  int b = if_on(p, "chain", "b");
  int c = if_on(p, "chain", "c");
  EXPECT_TRUE(cd.classic(b, a));
  EXPECT_TRUE(cd.classic(c, b));
  // Arms of the chain depend on every test in it, later ones included.
  int first_arm = p.find_statement(a)->then_block[0].id;
  EXPECT_TRUE(cd.chain(first_arm, c));
  EXPECT_FALSE(cd.classic(first_arm, c));
  EXPECT_TRUE(cd.depends(b, c));
  EXPECT_FALSE(cd.classic(b, c));
  // The head runs unconditionally.
  EXPECT_FALSE(cd.depends(a, c));
}

TEST(ControlDep, NonBranchIsNeverAController) {
  auto p = load("snippets.cfs");
  const auto* main = p.find_function("main");
  ControlDependence cd(*main);
  EXPECT_FALSE(cd.depends(main->body[1].id, main->body[0].id));
}

TEST(Related, AutocommitEnablersAndInfluenced) {
  auto rel = get_related_configs(load("autocommit.cfs"));
  EXPECT_EQ(rel.at("autocommit").enablers, (std::set<std::string>{"binlog_format"}));
  EXPECT_EQ(rel.at("autocommit").influenced, (std::set<std::string>{"flush_at_trx_commit"}));
  EXPECT_EQ(rel.at("flush_at_trx_commit").enablers, (std::set<std::string>{"autocommit"}));
  EXPECT_TRUE(rel.at("binlog_format").enablers.empty());
}

TEST(Related, EnablerAcrossCalls) {
  auto rel = get_related_configs(load("query_cache.cfs"));
  EXPECT_EQ(rel.at("query_cache_size").enablers, (std::set<std::string>{"query_cache_type"}));
  auto loops = get_related_configs(load("loops.cfs"));
  EXPECT_TRUE(loops.at("retries").influenced.count("backoff"));
}

TEST(Related, IndependentConfigsStayApart) {
  for (const char* f : {"independent.cfs", "c6_io.cfs"})
    for (const auto& [name, r] : get_related_configs(load(f))) EXPECT_TRUE(r.related().empty()) << f << ":" << name;
}

TEST(Related, ReportRoundTrips) {
  auto p = load("snippets.cfs");
  auto rel = get_related_configs(p);
  auto back = parse_related_report(format_related_report(p, rel));
  for (const auto& [name, r] : rel) {
    EXPECT_EQ(back.at(name).enablers, r.enablers);
    EXPECT_EQ(back.at(name).influenced, r.influenced);
  }
  EXPECT_THROW(parse_related_report("autocommit enabler:x\n"), Error);
}

// --- CFG shapes ---

namespace {

confscript::Cfg cfg_of(const std::string& src, const std::string& fn) {
  auto p = confscript::parse(src);
  return confscript::lower_function(*p.find_function(fn));
}

}  // namespace

TEST(Cfg, StraightLineIsOneBlock) {
  auto c = cfg_of("fn main() { let a = 1; let b = 2; cost latency 3; }", "main");
  ASSERT_EQ(c.graph.size(), 3);
  ASSERT_EQ(c.graph.succ[c.entry()].size(), 1u);
  int b = c.graph.succ[c.entry()][0];
  EXPECT_EQ(c.blocks[b].statements.size(), 3u);
  EXPECT_EQ(c.graph.succ[b], std::vector<int>{c.exit()});
}

TEST(Cfg, IfElseIsADiamond) {
  auto c = cfg_of(R"(
config x: bool = true;
fn main() { if (x) { cost latency 1; } else { cost latency 2; } cost latency 3; }
)",
                  "main");
  int head = c.block_containing(c.blocks[c.graph.succ[c.entry()][0]].statements.at(0));
  ASSERT_EQ(c.graph.succ[head].size(), 2u);
  int t = c.graph.succ[head][0], f = c.graph.succ[head][1];
  ASSERT_EQ(c.graph.succ[t].size(), 1u);
  ASSERT_EQ(c.graph.succ[f].size(), 1u);
  int merge = c.graph.succ[t][0];
  EXPECT_EQ(c.graph.succ[f][0], merge);
  EXPECT_EQ(c.blocks[merge].kind, confscript::BasicBlock::Kind::Merge);
  EXPECT_EQ(oracle::count_exit_paths(c.graph, c.entry()), 2u);
}

TEST(Cfg, ElseIfChainPaths) {
  auto p = load("autocommit.cfs");
  auto c = confscript::lower_function(*p.find_function("trx_commit_complete"));
  // flush==1 (dirty or not), flush==2 (dirty or not), neither
  EXPECT_EQ(oracle::count_exit_paths(c.graph, c.entry()), 5u);
  auto flat = cfg_of(R"(
config m: int in [0, 2] = 0;
fn main() { if (m == 0) { cost latency 1; } else if (m == 1) { cost latency 2; } else { cost latency 3; } }
)",
                     "main");
  EXPECT_EQ(oracle::count_exit_paths(flat.graph, flat.entry()), 3u);
}

TEST(Cfg, NodeInvariantsOnCorpus) {
  for (const char* f : {"autocommit.cfs", "loops.cfs", "nested_calls.cfs", "snippets.cfs",
                        "planner.cfs", "query_cache.cfs"}) {
    auto p = load(f);
    for (const auto& [name, c] : confscript::lower_to_cfg(p)) {
      auto preds = c.graph.predecessors();
      EXPECT_TRUE(preds[c.entry()].empty()) << f << ":" << name;
      EXPECT_TRUE(c.graph.succ[c.exit()].empty()) << f << ":" << name;
      for (int n = 0; n < c.graph.size(); ++n) {
        EXPECT_TRUE(n == c.exit() || !c.graph.succ[n].empty()) << f << ":" << name << " node " << n;
      }
      for (const auto& [stmt, block] : c.block_of) EXPECT_EQ(c.block_containing(stmt), block);
    }
  }
}

TEST(Cfg, UnknownStatementThrows) {
  auto c = cfg_of("fn main() { let a = 1; }", "main");
  EXPECT_THROW(c.block_containing(999), UnknownStatement);
}

// --- postdominance as an order ---

TEST(PostDom, IsAPartialOrderOnReachingNodes) {
  std::mt19937_64 rng(11);
  for (int g = 0; g < 60; ++g) {
    auto graph = oracle::random_cfg(rng, 12);
    PostDominatorTree pdt(graph);
    int n = graph.size();
    for (int a = 0; a < n; ++a) {
      if (!pdt.reaches_exit(a)) continue;
      EXPECT_TRUE(pdt.postdominates(a, a));
      for (int b = 0; b < n; ++b) {
        if (!pdt.reaches_exit(b) || a == b) continue;
        EXPECT_FALSE(pdt.postdominates(a, b) && pdt.postdominates(b, a)) << g;
        for (int c = 0; c < n; ++c) {
          bool chain = pdt.postdominates(c, b) && pdt.postdominates(b, a);
          EXPECT_TRUE(!chain || pdt.postdominates(c, a)) << g;
        }
      }
    }
  }
}

// --- related configs ---

TEST(Related, EnablerAndInfluencedAreDual) {
  for (const char* f : {"autocommit.cfs", "query_cache.cfs", "planner.cfs", "c6_io.cfs", "snippets.cfs"}) {
    auto p = load(f);
    auto rel = get_related_configs(p);
    for (const auto& [pname, ps] : rel)
      for (const auto& [qname, qs] : rel)
        EXPECT_EQ(ps.enablers.count(qname) > 0, qs.influenced.count(pname) > 0) << f << " " << pname << "/" << qname;
  }
}

TEST(Related, UnrelatedConfigChangesNothing) {
  const std::string base = R"(
config a: bool = true;
config b: int in [0, 3] = 1;
fn main() { if (a) { work(); } }
fn work() { if (b == 2) { cost latency 5; } }
)";
  auto before = get_related_configs(confscript::parse(base));
  auto after = get_related_configs(confscript::parse(
      base + "config z: bool = false;\nfn other() { if (z) { cost latency 1; } }\n"));
  for (const auto& [name, set] : before) EXPECT_EQ(after.at(name), set) << name;
  EXPECT_TRUE(after.at("z").related().empty());
  EXPECT_EQ(before.at("b").enablers, std::set<std::string>{"a"});
}

TEST(Related, UnconditionalUseHasNoEnablers) {
  auto p = confscript::parse(R"(
config a: bool = true;
config b: int in [0, 3] = 1;
fn main() { if (b == 1) { cost latency 2; } if (a) { cost latency 1; } }
)");
  EXPECT_TRUE(get_enabler_configs(p, "b").empty());
  EXPECT_TRUE(get_enabler_configs(p, "a").empty());
  EXPECT_THROW(get_enabler_configs(p, "nope"), UnknownConfig);
}

TEST(Related, LocalFlagCarriesEnabler) {
  auto p = confscript::parse(R"(
config a: bool = true;
config b: int in [0, 3] = 1;
fn main() { let on = a; if (on) { if (b == 2) { cost latency 5; } } }
)");
  EXPECT_EQ(get_enabler_configs(p, "b"), std::set<std::string>{"a"});
}
