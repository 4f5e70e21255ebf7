#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "violet/symexec/engine.hpp"
#include "violet/symexec/state.hpp"
#include "violet/trace/matcher.hpp"
#include "violet/trace/records.hpp"

namespace violet::trace {

/// One call in a finalized trace.
struct CallNode {
  CallRecord call;  // parent_id filled
  std::string function;
  std::int64_t latency = 0;
  /// Latency minus the latency of direct children.
  std::int64_t self_latency = 0;
  bool unmatched = false;
  int depth = 0;
  friend bool operator==(const CallNode&, const CallNode&) = default;
};

/// Everything the analyzer needs from one terminated state.
struct StateTrace {
  int state_id = 0;
  symexec::StateStatus status = symexec::StateStatus::Terminated;
  symexec::PathConstraint constraint;
  CostVector cost;
  /// Ordered by cid.
  std::vector<CallNode> calls;
  /// Sum of root call latencies (one root per trace window).
  std::int64_t total_latency = 0;
  RawTrace raw;
};

/// Matches records, rebuilds the call chain and computes latencies.
StateTrace finalize_state_trace(const symexec::ExecState& state, const AddressMap& addresses);

/// Calls with parents and latencies from raw records alone (used by
/// finalize_state_trace and trace-dump).
std::vector<CallNode> build_call_tree(const RawTrace& raw, const AddressMap& addresses);

std::vector<StateTrace> finalize_all(const symexec::ExplorationResult& result);

/// Trace file text: a `#` header naming the state, then one record per line
/// (`C cid eip ra ts tid`, `R ra ts tid`, `K metric amount ts`).
std::string write_trace_file(const RawTrace& raw, int state_id, const std::string& status);
/// Throws TraceFormatError with the offending line number.
RawTrace parse_trace_file(const std::string& text);

/// Indented call tree, one call per line: `name  latency=.. [unmatched]`.
std::string render_call_tree(const std::vector<CallNode>& calls);

}  // namespace violet::trace
