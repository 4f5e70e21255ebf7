#include "violet/confscript/diagnostics.hpp"

#include <sstream>

namespace violet::confscript {

namespace {
const char* severity_name(Diagnostic::Severity s) {
  switch (s) {
    case Diagnostic::Severity::Error: return "error";
    case Diagnostic::Severity::Warning: return "warning";
    case Diagnostic::Severity::Note: return "note";
  }
  return "error";
}

std::string first_message(const std::vector<Diagnostic>& diags) {
  return diags.empty() ? std::string("invalid program") : diags.front().message;
}
}  // namespace

std::string format_diagnostic(const std::string& file, const Diagnostic& d) {
  std::ostringstream out;
  out << file << ':' << d.line << ':' << d.column << ": " << severity_name(d.severity) << ": "
      << d.message;
  return out.str();
}

FrontendError::FrontendError(std::vector<Diagnostic> diags)
    : Error(first_message(diags)), diags_(std::move(diags)) {}

std::string FrontendError::render(const std::string& file) const {
  std::string out;
  for (const auto& d : diags_) out += format_diagnostic(file, d) + "\n";
  return out;
}

SyntaxError::SyntaxError(Diagnostic d, std::vector<std::string> expected)
    : FrontendError({std::move(d)}), expected_(std::move(expected)) {}

}  // namespace violet::confscript
