#include "violet/trace/records.hpp"

#include <sstream>

#include "violet/error.hpp"

namespace violet::trace {

const char* to_string(Metric m) {
  switch (m) {
    case Metric::Latency: return "latency";
    case Metric::Instructions: return "instructions";
    case Metric::Syscalls: return "syscalls";
    case Metric::FileIoOps: return "file_io_ops";
    case Metric::IoBytes: return "io_bytes";
    case Metric::SyncOps: return "sync_ops";
    case Metric::NetOps: return "net_ops";
  }
  return "?";
}

std::optional<Metric> parse_metric(const std::string& text) {
  for (Metric m : kAllMetrics)
    if (text == to_string(m)) return m;
  return std::nullopt;
}

Metric from_cost_metric(confscript::CostMetric m) {
  using confscript::CostMetric;
  switch (m) {
    case CostMetric::Latency: return Metric::Latency;
    case CostMetric::Syscalls: return Metric::Syscalls;
    case CostMetric::FileIoOps: return Metric::FileIoOps;
    case CostMetric::IoBytes: return Metric::IoBytes;
    case CostMetric::SyncOps: return Metric::SyncOps;
    case CostMetric::NetOps: return Metric::NetOps;
  }
  return Metric::Latency;
}

std::string to_string(const CostVector& c) {
  std::string out;
  for (Metric m : kAllMetrics) {
    if (!out.empty()) out += ' ';
    out += std::string(to_string(m)) + "=" + std::to_string(c[m]);
  }
  return out;
}

std::vector<CallRecord> RawTrace::calls() const {
  std::vector<CallRecord> out;
  for (std::size_t i = 0; i < events.size(); ++i)
    if (auto* c = std::get_if<CallRecord>(&events[i])) {
      out.push_back(*c);
      out.back().seq = i;
    }
  return out;
}

std::vector<ReturnRecord> RawTrace::returns() const {
  std::vector<ReturnRecord> out;
  for (std::size_t i = 0; i < events.size(); ++i)
    if (auto* r = std::get_if<ReturnRecord>(&events[i])) {
      out.push_back(*r);
      out.back().seq = i;
    }
  return out;
}

std::vector<MetricRecord> RawTrace::metrics() const {
  std::vector<MetricRecord> out;
  for (const auto& e : events)
    if (auto* k = std::get_if<MetricRecord>(&e)) out.push_back(*k);
  return out;
}

CostVector RawTrace::cost() const {
  CostVector c;
  for (const auto& k : metrics()) c[k.metric] += k.amount;
  return c;
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << "0x" << std::hex << v;
  return os.str();
}

AddressMap::AddressMap(const confscript::Program& program) {
  std::uint64_t next = kLoadBase;
  for (const auto& f : program.functions) {
    auto n = static_cast<std::uint64_t>(f.statement_count);
    Range r{f.name, next, next + 4 * (n + 2)};
    confscript::for_each_stmt(f.body, [&](const confscript::Stmt& s) {
      stmt_addr_[s.id] = r.start + 4 * (static_cast<std::uint64_t>(s.index) + 1);
    });
    ranges_.push_back(r);
    next = r.end;
  }
}

std::uint64_t AddressMap::entry_of(const std::string& function) const {
  for (const auto& r : ranges_)
    if (r.function == function) return r.start;
  throw UnknownName("no address range for function '" + function + "'");
}

std::uint64_t AddressMap::address_of(int stmt_id) const {
  auto it = stmt_addr_.find(stmt_id);
  if (it == stmt_addr_.end())
    throw UnknownStatement("statement " + std::to_string(stmt_id) + " has no address");
  return it->second;
}

std::string AddressMap::function_at(std::uint64_t addr) const {
  for (const auto& r : ranges_)
    if (addr >= r.start && addr < r.end) return r.function;
  return {};
}

std::string AddressMap::to_symbols() const {
  std::string out;
  for (const auto& r : ranges_) out += hex(r.start) + " " + hex(r.end) + " " + r.function + "\n";
  return out;
}

AddressMap AddressMap::parse_symbols(const std::string& text) {
  AddressMap m;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string start, end, name;
    if (!(ls >> start >> end >> name))
      throw TraceFormatError("symbols line " + std::to_string(lineno) + ": expected `start end name`");
    try {
      m.ranges_.push_back({name, std::stoull(start, nullptr, 16), std::stoull(end, nullptr, 16)});
    } catch (const std::logic_error&) {
      throw TraceFormatError("symbols line " + std::to_string(lineno) + ": bad address");
    }
  }
  return m;
}

}  // namespace violet::trace
