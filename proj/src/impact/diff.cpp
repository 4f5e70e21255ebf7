#include "violet/impact/diff.hpp"

#include <map>

#include "violet/error.hpp"
#include "violet/impact/lcs.hpp"

namespace violet::impact {

using trace::Metric;

std::vector<trace::CostVector> exclusive_costs(const trace::StateTrace& t) {
  std::map<int, std::size_t> index;
  for (std::size_t i = 0; i < t.calls.size(); ++i) index[t.calls[i].call.cid] = i;
  std::vector<trace::CostVector> out(t.calls.size());

  std::vector<int> stack;  // open cids in event order
  for (const auto& e : t.raw.events) {
    if (auto* c = std::get_if<trace::CallRecord>(&e)) {
      stack.push_back(c->cid);
    } else if (auto* r = std::get_if<trace::ReturnRecord>(&e)) {
      for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
        if (t.calls[index.at(*it)].call.return_address == r->return_address) {
          stack.erase(std::next(it).base());
          break;
        }
      }
    } else if (auto* k = std::get_if<trace::MetricRecord>(&e)) {
      if (k->metric == Metric::Latency || k->metric == Metric::Instructions || stack.empty())
        continue;
      out[index.at(stack.back())][k->metric] += k->amount;
    }
  }
  for (std::size_t i = 0; i < t.calls.size(); ++i)
    out[i][Metric::Latency] = t.calls[i].self_latency;
  return out;
}

DiffCriticalPath differential_critical_path(const trace::StateTrace& slow,
                                            const trace::StateTrace& fast) {
  if (slow.calls.empty() || fast.calls.empty())
    throw DegenerateTrace("state " +
                          std::to_string(slow.calls.empty() ? slow.state_id : fast.state_id) +
                          " has no call records");
  using Key = std::pair<std::uint64_t, std::uint64_t>;
  auto keys = [](const trace::StateTrace& t) {
    std::vector<Key> k;
    for (const auto& n : t.calls) k.emplace_back(n.call.eip, n.call.return_address);
    return k;
  };
  auto pairs = lcs_pairs(keys(slow), keys(fast));
  auto slow_cost = exclusive_costs(slow);
  auto fast_cost = exclusive_costs(fast);

  DiffCriticalPath d;
  d.slow_state = slow.state_id;
  d.fast_state = fast.state_id;
  d.lcs_length = pairs.size();

  std::vector<std::optional<std::size_t>> partner(slow.calls.size());
  for (auto [i, j] : pairs) partner[i] = j;

  std::optional<std::size_t> best;
  std::int64_t best_latency = 0;
  for (std::size_t i = 0; i < slow.calls.size(); ++i) {
    const auto& n = slow.calls[i];
    DiffEntry e;
    e.function = n.function;
    e.slow_cid = n.call.cid;
    e.diff = slow_cost[i];
    if (partner[i]) {
      e.fast_cid = fast.calls[*partner[i]].call.cid;
      for (auto m : trace::kAllMetrics) e.diff[m] -= fast_cost[*partner[i]][m];
    }
    bool root = !n.call.parent_id;
    std::int64_t lat = e.diff[Metric::Latency];
    if (!root && lat > best_latency) {
      best_latency = lat;
      best = i;
    }
    (partner[i] ? d.common : d.slow_only).push_back(std::move(e));
  }

  if (best) {
    const auto& crit = slow.calls[*best];
    d.critical_cid = crit.call.cid;
    d.critical_latency = best_latency;
    std::map<int, const trace::CallNode*> by_cid;
    for (const auto& n : slow.calls) by_cid[n.call.cid] = &n;
    for (const trace::CallNode* n = &crit; n;
         n = n->call.parent_id ? by_cid.at(*n->call.parent_id) : nullptr)
      d.critical_chain.insert(d.critical_chain.begin(), n->function);
  }
  return d;
}

}  // namespace violet::impact
