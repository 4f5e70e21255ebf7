#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "violet/trace/records.hpp"

namespace violet::trace {

struct MatchedCall {
  CallRecord call;
  std::optional<ReturnRecord> ret;
  std::int64_t latency = 0;
  /// No return found; latency runs to the end of the state.
  bool unmatched = false;
  friend bool operator==(const MatchedCall&, const MatchedCall&) = default;
};

/// Pairs calls with returns by return address, separately per thread.
///
/// Calls are taken latest first; each claims the earliest unclaimed return
/// of its thread with the same return address that does not precede it.
/// Records are ordered by timestamp, then by stream position (`seq`), so
/// zero-latency calls sharing a timestamp still nest. Unmatched calls get
/// `end_time - timestamp`. Output is ordered by (thread, cid).
std::vector<MatchedCall> match_call_returns(const std::vector<CallRecord>& calls,
                                            const std::vector<ReturnRecord>& returns,
                                            std::int64_t end_time);

/// Fills parent_id per thread: the parent of A is the record B with
/// B.cid < A.cid and B.eip < A.return_address that minimizes
/// A.return_address - B.eip (ties go to the latest such B). Records with no
/// candidate are roots.
std::vector<CallRecord> reconstruct_call_chain(std::vector<CallRecord> calls);

/// Same rule restricted to candidates still open when A is called (the
/// match supplies each call's return). Recursive calls through one callsite
/// then resolve to the innermost open activation.
std::vector<MatchedCall> reconstruct_call_chain(std::vector<MatchedCall> matched);

}  // namespace violet::trace
