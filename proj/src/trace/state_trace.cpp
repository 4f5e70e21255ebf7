#include "violet/trace/state_trace.hpp"

#include <map>
#include <sstream>

#include "violet/error.hpp"

namespace violet::trace {

std::vector<CallNode> build_call_tree(const RawTrace& raw, const AddressMap& addresses) {
  auto matched = reconstruct_call_chain(match_call_returns(raw.calls(), raw.returns(), raw.end_time));

  std::vector<CallNode> nodes;
  std::map<int, std::size_t> by_cid;
  for (std::size_t i = 0; i < matched.size(); ++i) {
    CallNode n;
    n.call = matched[i].call;
    n.function = addresses.function_at(matched[i].call.eip);
    if (n.function.empty()) n.function = hex(matched[i].call.eip);
    n.latency = matched[i].latency;
    n.self_latency = n.latency;
    n.unmatched = matched[i].unmatched;
    by_cid[n.call.cid] = nodes.size();
    nodes.push_back(std::move(n));
  }
  for (auto& n : nodes) {
    if (!n.call.parent_id) continue;
    auto& p = nodes[by_cid.at(*n.call.parent_id)];
    p.self_latency -= n.latency;
  }
  for (auto& n : nodes) {
    int d = 0;
    for (auto p = n.call.parent_id; p; p = nodes[by_cid.at(*p)].call.parent_id) ++d;
    n.depth = d;
  }
  return nodes;
}

StateTrace finalize_state_trace(const symexec::ExecState& state, const AddressMap& addresses) {
  StateTrace t;
  t.state_id = state.id;
  t.status = state.status;
  t.constraint = state.constraint;
  t.cost = state.cost;
  t.raw = state.trace;
  t.calls = build_call_tree(state.trace, addresses);
  for (const auto& n : t.calls)
    if (!n.call.parent_id) t.total_latency += n.latency;
  return t;
}

std::vector<StateTrace> finalize_all(const symexec::ExplorationResult& result) {
  std::vector<StateTrace> out;
  for (const auto& s : result.states) out.push_back(finalize_state_trace(s, result.addresses));
  return out;
}

std::string write_trace_file(const RawTrace& raw, int state_id, const std::string& status) {
  std::ostringstream os;
  os << "# state " << state_id << " " << status << " end " << raw.end_time << "\n";
  for (const auto& e : raw.events) {
    if (auto* c = std::get_if<CallRecord>(&e)) {
      os << "C " << c->cid << " " << hex(c->eip) << " " << hex(c->return_address) << " "
         << c->timestamp << " " << c->thread_id << "\n";
    } else if (auto* r = std::get_if<ReturnRecord>(&e)) {
      os << "R " << hex(r->return_address) << " " << r->timestamp << " " << r->thread_id << "\n";
    } else if (auto* k = std::get_if<MetricRecord>(&e)) {
      os << "K " << to_string(k->metric) << " " << k->amount << " " << k->timestamp << "\n";
    }
  }
  return os.str();
}

namespace {

std::uint64_t parse_addr(const std::string& s, int lineno) {
  if (s.rfind("0x", 0) != 0)
    throw TraceFormatError("trace line " + std::to_string(lineno) + ": address '" + s +
                           "' must start with 0x");
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s.substr(2), &used, 16);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used == 0 || used != s.size() - 2)
    throw TraceFormatError("trace line " + std::to_string(lineno) + ": bad address '" + s + "'");
  return v;
}

std::int64_t parse_int(const std::string& s, int lineno) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used, 10);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw TraceFormatError("trace line " + std::to_string(lineno) + ": bad integer '" + s + "'");
  return v;
}

}  // namespace

RawTrace parse_trace_file(const std::string& text) {
  RawTrace raw;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_end = false;
  std::int64_t last_ts = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string w;
      while (hs >> w)
        if (w == "end" && hs >> w) {
          raw.end_time = parse_int(w, lineno);
          have_end = true;
        }
      continue;
    }
    std::istringstream ls(line);
    std::vector<std::string> f;
    for (std::string w; ls >> w;) f.push_back(w);
    auto need = [&](std::size_t n) {
      if (f.size() != n)
        throw TraceFormatError("trace line " + std::to_string(lineno) + ": expected " +
                               std::to_string(n) + " fields, got " + std::to_string(f.size()));
    };
    if (f[0] == "C") {
      need(6);
      CallRecord c;
      c.cid = static_cast<int>(parse_int(f[1], lineno));
      c.eip = parse_addr(f[2], lineno);
      c.return_address = parse_addr(f[3], lineno);
      c.timestamp = parse_int(f[4], lineno);
      c.thread_id = static_cast<int>(parse_int(f[5], lineno));
      last_ts = std::max(last_ts, c.timestamp);
      raw.events.emplace_back(c);
    } else if (f[0] == "R") {
      need(4);
      ReturnRecord r{parse_addr(f[1], lineno), parse_int(f[2], lineno),
                     static_cast<int>(parse_int(f[3], lineno)), 0};
      last_ts = std::max(last_ts, r.timestamp);
      raw.events.emplace_back(r);
    } else if (f[0] == "K") {
      need(4);
      auto m = parse_metric(f[1]);
      if (!m)
        throw TraceFormatError("trace line " + std::to_string(lineno) + ": unknown metric '" +
                               f[1] + "'");
      MetricRecord k{*m, parse_int(f[2], lineno), parse_int(f[3], lineno)};
      if (k.amount < 0)
        throw TraceFormatError("trace line " + std::to_string(lineno) + ": negative amount");
      last_ts = std::max(last_ts, k.timestamp + (k.metric == Metric::Latency ? k.amount : 0));
      raw.events.emplace_back(k);
    } else {
      throw TraceFormatError("trace line " + std::to_string(lineno) + ": unknown record '" +
                             f[0] + "'");
    }
  }
  if (!have_end) raw.end_time = last_ts;
  return raw;
}

std::string render_call_tree(const std::vector<CallNode>& calls) {
  std::string out;
  for (const auto& n : calls) {
    out += std::string(static_cast<std::size_t>(2 * n.depth), ' ') + n.function +
           "  cid=" + std::to_string(n.call.cid) + " latency=" + std::to_string(n.latency) +
           " self=" + std::to_string(n.self_latency);
    if (n.unmatched) out += " [unmatched]";
    out += "\n";
  }
  return out;
}

}  // namespace violet::trace
