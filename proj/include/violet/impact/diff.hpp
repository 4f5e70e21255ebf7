#pragma once

#include <optional>
#include <string>
#include <vector>

#include "violet/trace/records.hpp"
#include "violet/trace/state_trace.hpp"

namespace violet::impact {

struct DiffEntry {
  std::string function;
  int slow_cid = 0;
  /// Set for records common to both traces.
  std::optional<int> fast_cid;
  /// Exclusive cost of the slow record minus that of the fast record (the
  /// full slow cost for slow-only records). Latency is exclusive latency.
  trace::CostVector diff;
  friend bool operator==(const DiffEntry&, const DiffEntry&) = default;
};

struct DiffCriticalPath {
  int slow_state = 0;
  int fast_state = 0;
  std::size_t lcs_length = 0;
  std::vector<DiffEntry> common;
  std::vector<DiffEntry> slow_only;
  /// Function names from the root down to the critical call; empty when no
  /// non-root record costs more in the slow trace.
  std::vector<std::string> critical_chain;
  std::optional<int> critical_cid;
  std::int64_t critical_latency = 0;
  friend bool operator==(const DiffCriticalPath&, const DiffCriticalPath&) = default;
};

/// Exclusive cost per call: latency from timestamps, logical metrics from
/// the metric records charged while the call was innermost. Instruction
/// totals are per trace window, so they are not attributed to calls.
std::vector<trace::CostVector> exclusive_costs(const trace::StateTrace& t);

/// Aligns the two call-record sequences by LCS over (eip, return address),
/// subtracts metrics of common records and picks the non-root record with
/// the largest positive differential exclusive latency. Throws
/// DegenerateTrace when either trace has no call record.
DiffCriticalPath differential_critical_path(const trace::StateTrace& slow,
                                            const trace::StateTrace& fast);

}  // namespace violet::impact
