#include "violet/confscript/domain.hpp"

#include <charconv>

namespace violet::confscript {

std::int64_t Domain::size() const {
  switch (kind) {
    case Kind::Bool:
      return 2;
    case Kind::Int:
      return hi < lo ? 0 : hi - lo + 1;
    case Kind::Enum:
      return static_cast<std::int64_t>(members.size());
    case Kind::Unbounded:
      return 0;
  }
  return 0;
}

bool Domain::contains(std::int64_t v) const {
  if (kind == Kind::Unbounded) return true;
  return v >= lo && v <= hi;
}

std::string Domain::format_value(std::int64_t v) const {
  switch (kind) {
    case Kind::Bool:
      return v == 0 ? "false" : "true";
    case Kind::Enum:
      if (v >= 0 && v < static_cast<std::int64_t>(members.size())) return members[static_cast<std::size_t>(v)];
      return std::to_string(v);
    default:
      return std::to_string(v);
  }
}

std::optional<std::int64_t> Domain::parse_value(std::string_view text) const {
  if (kind == Kind::Bool) {
    if (text == "true" || text == "1") return 1;
    if (text == "false" || text == "0") return 0;
    return std::nullopt;
  }
  if (kind == Kind::Enum) {
    for (std::size_t i = 0; i < members.size(); ++i)
      if (members[i] == text) return static_cast<std::int64_t>(i);
    return std::nullopt;
  }
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  if (!contains(v)) return std::nullopt;
  return v;
}

std::string Domain::to_string() const {
  switch (kind) {
    case Kind::Bool:
      return "bool";
    case Kind::Int:
      return "int in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
    case Kind::Enum: {
      std::string out = "enum { ";
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (i) out += ", ";
        out += members[i];
      }
      return out + " }";
    }
    case Kind::Unbounded:
      return "int";
  }
  return {};
}

}  // namespace violet::confscript
