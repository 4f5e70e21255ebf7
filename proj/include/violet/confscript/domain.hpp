#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace violet::confscript {

/// Largest integer domain accepted for configs and inputs.
inline constexpr std::int64_t kMaxIntDomain = 4096;

/// Finite value space of a config, input, parameter or extern return.
///
/// Every value is carried as an int64: bools are 0/1 and enum values are the
/// member's declaration index. `Unbounded` is only legal on function
/// parameters.
struct Domain {
  enum class Kind { Bool, Int, Enum, Unbounded };

  Kind kind = Kind::Bool;
  std::int64_t lo = 0;
  std::int64_t hi = 1;
  std::vector<std::string> members;

  static Domain boolean() { return Domain{Kind::Bool, 0, 1, {}}; }
  static Domain integer(std::int64_t lo, std::int64_t hi) { return Domain{Kind::Int, lo, hi, {}}; }
  static Domain enumeration(std::vector<std::string> members) {
    auto hi = static_cast<std::int64_t>(members.size()) - 1;
    return Domain{Kind::Enum, 0, hi, std::move(members)};
  }
  static Domain unbounded() { return Domain{Kind::Unbounded, 0, 0, {}}; }

  bool finite() const { return kind != Kind::Unbounded; }

  /// bool=2, int=hi-lo+1, enum=member count; 0 for unbounded or empty ranges.
  std::int64_t size() const;

  bool contains(std::int64_t v) const;

  /// i-th value in domain order (false<true, numeric, enum declaration order).
  std::int64_t value_at(std::int64_t i) const { return lo + i; }

  /// Renders a value the way it is written in source (`true`, `4`, `INSERT`).
  std::string format_value(std::int64_t v) const;

  /// Parses a source-level literal for this domain. Bools accept true/false/0/1.
  std::optional<std::int64_t> parse_value(std::string_view text) const;

  /// Source spelling: `bool`, `int in [0, 2]`, `enum { A, B }`, `int`.
  std::string to_string() const;

  friend bool operator==(const Domain&, const Domain&) = default;
};

}  // namespace violet::confscript
