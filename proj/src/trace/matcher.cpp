#include "violet/trace/matcher.hpp"

#include <algorithm>
#include <map>

namespace violet::trace {

namespace {

/// Record order: timestamp, then position in the stream.
template <typename A, typename B>
bool before(const A& a, const B& b) {
  if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
  return a.seq < b.seq;
}

}  // namespace

std::vector<MatchedCall> match_call_returns(const std::vector<CallRecord>& calls,
                                            const std::vector<ReturnRecord>& returns,
                                            std::int64_t end_time) {
  std::map<int, std::vector<std::size_t>> calls_by_tid;
  std::map<int, std::vector<std::size_t>> rets_by_tid;
  for (std::size_t i = 0; i < calls.size(); ++i) calls_by_tid[calls[i].thread_id].push_back(i);
  for (std::size_t i = 0; i < returns.size(); ++i) rets_by_tid[returns[i].thread_id].push_back(i);

  std::vector<MatchedCall> out;
  for (auto& [tid, cidx] : calls_by_tid) {
    // Returns of this thread grouped by address, earliest first.
    std::map<std::uint64_t, std::vector<std::size_t>> by_ra;
    for (std::size_t r : rets_by_tid[tid]) by_ra[returns[r].return_address].push_back(r);
    for (auto& [ra, list] : by_ra)
      std::stable_sort(list.begin(), list.end(),
                       [&](std::size_t a, std::size_t b) { return before(returns[a], returns[b]); });
    std::vector<char> taken(returns.size(), 0);

    std::vector<std::size_t> order = cidx;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (calls[a].timestamp != calls[b].timestamp) return calls[a].timestamp > calls[b].timestamp;
      if (calls[a].seq != calls[b].seq) return calls[a].seq > calls[b].seq;
      return calls[a].cid > calls[b].cid;
    });

    std::vector<MatchedCall> local;
    for (std::size_t ci : order) {
      const auto& c = calls[ci];
      MatchedCall m{c, std::nullopt, 0, false};
      for (std::size_t r : by_ra[c.return_address]) {
        if (taken[r] || before(returns[r], c)) continue;
        taken[r] = 1;
        m.ret = returns[r];
        break;
      }
      if (m.ret) {
        m.latency = m.ret->timestamp - c.timestamp;
      } else {
        m.unmatched = true;
        m.latency = std::max<std::int64_t>(0, end_time - c.timestamp);
      }
      local.push_back(m);
    }
    std::sort(local.begin(), local.end(),
              [](const MatchedCall& a, const MatchedCall& b) { return a.call.cid < b.call.cid; });
    out.insert(out.end(), local.begin(), local.end());
  }
  return out;
}

namespace {

template <typename Live>
void assign_parents(std::vector<CallRecord>& calls, Live&& live) {
  std::map<int, std::vector<std::size_t>> by_tid;
  for (std::size_t i = 0; i < calls.size(); ++i) by_tid[calls[i].thread_id].push_back(i);
  for (auto& [tid, idx] : by_tid) {
    for (std::size_t a : idx) {
      auto& A = calls[a];
      A.parent_id.reset();
      std::optional<std::uint64_t> best_gap;
      for (std::size_t b : idx) {
        const auto& B = calls[b];
        if (B.cid >= A.cid || B.eip >= A.return_address || !live(b, A)) continue;
        std::uint64_t gap = A.return_address - B.eip;
        if (!best_gap || gap < *best_gap || (gap == *best_gap && B.cid > *A.parent_id)) {
          best_gap = gap;
          A.parent_id = B.cid;
        }
      }
    }
  }
}

}  // namespace

std::vector<CallRecord> reconstruct_call_chain(std::vector<CallRecord> calls) {
  assign_parents(calls, [](std::size_t, const CallRecord&) { return true; });
  return calls;
}

std::vector<MatchedCall> reconstruct_call_chain(std::vector<MatchedCall> matched) {
  std::vector<CallRecord> calls;
  for (const auto& m : matched) calls.push_back(m.call);
  // B can be A's parent only while B is open: called before A, returning after.
  assign_parents(calls, [&](std::size_t b, const CallRecord& A) {
    const auto& B = matched[b];
    if (before(A, B.call)) return false;
    return !B.ret || !before(*B.ret, A);
  });
  for (std::size_t i = 0; i < matched.size(); ++i) matched[i].call = calls[i];
  return matched;
}

}  // namespace violet::trace
