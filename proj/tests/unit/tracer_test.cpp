#include <gtest/gtest.h>

#include <filesystem>
#include <map>

#include "test_support.hpp"
#include "violet/error.hpp"
#include "violet/symexec/engine.hpp"
#include "violet/trace/matcher.hpp"
#include "violet/trace/state_trace.hpp"

using namespace violet;
using namespace violet::trace;
using namespace testing_support;

namespace {

CallRecord call(int cid, std::uint64_t eip, std::uint64_t ra, std::int64_t ts, int tid = 0) {
  return CallRecord{cid, eip, ra, ts, tid, {}, 0};
}
ReturnRecord ret(std::uint64_t ra, std::int64_t ts, int tid = 0) { return ReturnRecord{ra, ts, tid, 0}; }

/// Latency per cid from a per-thread stack. Engine traces are well nested,
/// so the newest open call is always the one returning.
std::map<int, std::int64_t> stack_latencies(const RawTrace& raw) {
  std::map<int, std::vector<std::pair<int, std::int64_t>>> open;
  std::map<int, std::int64_t> out;
  for (const auto& ev : raw.events) {
    if (const auto* c = std::get_if<CallRecord>(&ev)) {
      open[c->thread_id].emplace_back(c->cid, c->timestamp);
    } else if (const auto* r = std::get_if<ReturnRecord>(&ev)) {
      auto& st = open[r->thread_id];
      out[st.back().first] = r->timestamp - st.back().second;
      st.pop_back();
    }
  }
  for (auto& [tid, st] : open)
    for (auto& [cid, ts] : st) out[cid] = raw.end_time - ts;
  return out;
}

std::vector<std::filesystem::path> corpus_files() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(VIOLET_CORPUS_DIR)) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Tracer, ParentsMatchEngineStackOnCorpus) {
  for (const auto& f : corpus_files()) {
    auto p = confscript::parse_file(f.string());
    auto result = symexec::explore(p, {}, all_globals(p), {});
    auto traces = finalize_all(result);
    ASSERT_EQ(traces.size(), result.states.size());
    for (std::size_t i = 0; i < traces.size(); ++i) {
      const auto& sp = result.states[i].stack_parent;
      ASSERT_EQ(traces[i].calls.size(), sp.size()) << f;
      for (const auto& node : traces[i].calls)
        EXPECT_EQ(node.call.parent_id.value_or(0), sp.at(node.call.cid))
            << f.filename() << " state " << traces[i].state_id << " cid " << node.call.cid;
    }
  }
}

TEST(Tracer, LatenciesMatchStackOracleOnCorpus) {
  for (const auto& f : corpus_files()) {
    auto p = confscript::parse_file(f.string());
    auto result = symexec::explore(p, {}, all_globals(p), {});
    for (const auto& t : finalize_all(result)) {
      auto expect = stack_latencies(t.raw);
      for (const auto& node : t.calls) EXPECT_EQ(node.latency, expect.at(node.call.cid)) << f;
    }
  }
}

TEST(Tracer, SelfLatencyExcludesChildren) {
  auto p = load("autocommit.cfs");
  auto result = symexec::explore(p, {}, {}, {});
  auto t = finalize_all(result).at(0);
  std::map<int, std::int64_t> child_sum;
  for (const auto& n : t.calls)
    if (n.call.parent_id) child_sum[*n.call.parent_id] += n.latency;
  for (const auto& n : t.calls) EXPECT_EQ(n.self_latency, n.latency - child_sum[n.call.cid]);
  EXPECT_EQ(t.total_latency, 2600);
}

TEST(Tracer, RecursionResolvesToInnermostActivation) {
  auto p = load("nested_calls.cfs");
  auto result = symexec::explore(p, {{"depth", 3}}, {}, {});
  ASSERT_EQ(result.states.size(), 1u);
  auto t = finalize_all(result)[0];
  int max_depth = 0;
  for (const auto& n : t.calls) {
    EXPECT_EQ(n.call.parent_id.value_or(0), result.states[0].stack_parent.at(n.call.cid));
    if (n.function == "walk") max_depth = std::max(max_depth, n.depth);
  }
  EXPECT_GE(max_depth, 3);
}

TEST(Tracer, TwoWindowsGiveTwoRoots) {
  auto p = load("nested_calls.cfs");
  auto result = symexec::explore(p, {}, {}, {});
  auto t = finalize_all(result)[0];
  std::int64_t roots = 0, sum = 0;
  for (const auto& n : t.calls)
    if (!n.call.parent_id) {
      ++roots;
      sum += n.latency;
    }
  EXPECT_EQ(roots, 2);
  EXPECT_EQ(t.total_latency, sum);
}

TEST(Matcher, InterleavedThreadsStaySeparate) {
  // Two threads run the same callsite; returns interleave.
  std::vector<CallRecord> calls = {call(1, 0x10, 0x50, 0, 1), call(2, 0x10, 0x50, 5, 2)};
  std::vector<ReturnRecord> rets = {ret(0x50, 7, 1), ret(0x50, 20, 2)};
  auto m = match_call_returns(calls, rets, 100);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0].latency, 7);
  EXPECT_EQ(m[1].latency, 15);
}

TEST(Matcher, UnmatchedCallRunsToEnd) {
  std::vector<CallRecord> calls = {call(1, 0x10, 0, 3)};
  auto m = match_call_returns(calls, {}, 40);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_TRUE(m[0].unmatched);
  EXPECT_EQ(m[0].latency, 37);
}

TEST(Matcher, ZeroLatencySiblingsNest) {
  // main calls f twice through different sites at the same timestamp.
  RawTrace raw;
  raw.events = {call(1, 0x100, 0, 0), call(2, 0x200, 0x108, 0), ret(0x108, 0),
                call(3, 0x200, 0x10c, 0), ret(0x10c, 0), ret(0, 0)};
  auto m = reconstruct_call_chain(match_call_returns(raw.calls(), raw.returns(), 0));
  ASSERT_EQ(m.size(), 3u);
  EXPECT_FALSE(m[0].call.parent_id);
  EXPECT_EQ(m[1].call.parent_id, 1);
  EXPECT_EQ(m[2].call.parent_id, 1);
}

TEST(Matcher, NearestEnclosingFunctionIsParent) {
  std::vector<CallRecord> calls = {call(1, 0x100, 0, 0), call(2, 0x200, 0x110, 1),
                                   call(3, 0x300, 0x210, 2)};
  auto out = reconstruct_call_chain(calls);
  EXPECT_FALSE(out[0].parent_id);
  EXPECT_EQ(out[1].parent_id, 1);
  EXPECT_EQ(out[2].parent_id, 2);
}

TEST(Matcher, EmptyTrace) {
  EXPECT_TRUE(match_call_returns({}, {}, 0).empty());
  RawTrace raw;
  EXPECT_TRUE(build_call_tree(raw, AddressMap{}).empty());
  EXPECT_EQ(render_call_tree({}), "");
}

TEST(TraceFile, RoundTrip) {
  auto p = load("nested_calls.cfs");
  auto result = symexec::explore(p, {}, all_globals(p), {});
  for (const auto& s : result.states) {
    auto text = write_trace_file(s.trace, s.id, symexec::to_string(s.status));
    auto back = parse_trace_file(text);
    EXPECT_EQ(back.events.size(), s.trace.events.size());
    EXPECT_EQ(back.cost(), s.trace.cost());
    EXPECT_EQ(back.end_time, s.trace.end_time);
    EXPECT_EQ(write_trace_file(back, s.id, symexec::to_string(s.status)), text);
  }
}

TEST(TraceFile, BadLineIsReported) {
  try {
    parse_trace_file("# state 0\nC 1 0x1000 0x0 0 0\nZ what\n");
    FAIL() << "no error";
  } catch (const TraceFormatError& e) {
    EXPECT_NE(std::string(e.what()).find('3'), std::string::npos) << e.what();
  }
}

TEST(TraceFile, SymbolsRoundTrip) {
  auto p = load("autocommit.cfs");
  AddressMap m(p);
  // The symbols file keeps function ranges only.
  EXPECT_EQ(AddressMap::parse_symbols(m.to_symbols()).ranges(), m.ranges());
  EXPECT_EQ(m.ranges().front().start, AddressMap::kLoadBase);
  for (std::size_t i = 1; i < m.ranges().size(); ++i)
    EXPECT_EQ(m.ranges()[i].start, m.ranges()[i - 1].end);
  EXPECT_EQ(m.function_at(m.entry_of("fil_flush")), "fil_flush");
}
