#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "violet/confscript/ast.hpp"

namespace violet::trace {

/// CostVector components, in serialization order.
enum class Metric { Latency, Instructions, Syscalls, FileIoOps, IoBytes, SyncOps, NetOps };
inline constexpr std::size_t kMetricCount = 7;
inline constexpr std::array<Metric, kMetricCount> kAllMetrics = {
    Metric::Latency, Metric::Instructions, Metric::Syscalls, Metric::FileIoOps,
    Metric::IoBytes, Metric::SyncOps,      Metric::NetOps};

const char* to_string(Metric m);
std::optional<Metric> parse_metric(const std::string& text);
Metric from_cost_metric(confscript::CostMetric m);

/// Latency units plus the logical metrics, all non-negative.
struct CostVector {
  std::array<std::int64_t, kMetricCount> values{};

  std::int64_t& operator[](Metric m) { return values[static_cast<std::size_t>(m)]; }
  std::int64_t operator[](Metric m) const { return values[static_cast<std::size_t>(m)]; }
  std::int64_t latency() const { return (*this)[Metric::Latency]; }

  CostVector& operator+=(const CostVector& o) {
    for (std::size_t i = 0; i < kMetricCount; ++i) values[i] += o.values[i];
    return *this;
  }
  friend CostVector operator+(CostVector a, const CostVector& b) { return a += b; }
  friend bool operator==(const CostVector&, const CostVector&) = default;
  friend auto operator<=>(const CostVector&, const CostVector&) = default;
};

/// `latency=2600 instructions=31 ...`, every metric listed.
std::string to_string(const CostVector& c);

struct CallRecord {
  int cid = 0;
  std::uint64_t eip = 0;
  std::uint64_t return_address = 0;
  std::int64_t timestamp = 0;
  int thread_id = 0;
  /// Filled by reconstruct_call_chain.
  std::optional<int> parent_id;
  /// Position in the record stream. Orders records that share a timestamp.
  std::size_t seq = 0;
  friend bool operator==(const CallRecord&, const CallRecord&) = default;
};

struct ReturnRecord {
  std::uint64_t return_address = 0;
  std::int64_t timestamp = 0;
  int thread_id = 0;
  std::size_t seq = 0;
  friend bool operator==(const ReturnRecord&, const ReturnRecord&) = default;
};

/// A `cost` charge (or the instruction total of a closing trace window).
struct MetricRecord {
  Metric metric = Metric::Latency;
  std::int64_t amount = 0;
  std::int64_t timestamp = 0;
  friend bool operator==(const MetricRecord&, const MetricRecord&) = default;
};

using TraceEvent = std::variant<CallRecord, ReturnRecord, MetricRecord>;

/// Records of one state in emission order.
struct RawTrace {
  std::vector<TraceEvent> events;
  /// Virtual clock when the state ended.
  std::int64_t end_time = 0;

  /// Calls and returns with `seq` set to their event index.
  std::vector<CallRecord> calls() const;
  std::vector<ReturnRecord> returns() const;
  std::vector<MetricRecord> metrics() const;
  /// Sum of the metric records.
  CostVector cost() const;

  friend bool operator==(const RawTrace&, const RawTrace&) = default;
};

/// Synthetic code layout: functions sit back to back from the load base in
/// declaration order. A function with n statements spans 4*(n+2) bytes; its
/// entry is the range start, statement k sits at start+4*(k+1), and a
/// callsite's return address is its own address + 4.
class AddressMap {
 public:
  static constexpr std::uint64_t kLoadBase = 0x1000;

  AddressMap() = default;
  explicit AddressMap(const confscript::Program& program);

  struct Range {
    std::string function;
    std::uint64_t start = 0;
    std::uint64_t end = 0;  // exclusive
    friend bool operator==(const Range&, const Range&) = default;
  };

  const std::vector<Range>& ranges() const { return ranges_; }
  std::uint64_t entry_of(const std::string& function) const;
  std::uint64_t address_of(int stmt_id) const;
  std::uint64_t return_address(int stmt_id) const { return address_of(stmt_id) + 4; }
  /// Function whose range holds `addr`, or empty.
  std::string function_at(std::uint64_t addr) const;
  static std::uint64_t offset(std::uint64_t addr) { return addr - kLoadBase; }

  /// `0x1000 0x1028 main` lines.
  std::string to_symbols() const;
  static AddressMap parse_symbols(const std::string& text);

  friend bool operator==(const AddressMap&, const AddressMap&) = default;

 private:
  std::vector<Range> ranges_;
  std::map<int, std::uint64_t> stmt_addr_;
};

std::string hex(std::uint64_t v);

}  // namespace violet::trace
