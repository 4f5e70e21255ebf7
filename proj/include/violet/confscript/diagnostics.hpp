#pragma once

#include <string>
#include <vector>

#include "violet/error.hpp"

namespace violet::confscript {

struct Diagnostic {
  enum class Severity { Error, Warning, Note };
  Severity severity = Severity::Error;
  int line = 0;
  int column = 0;
  std::string message;
};

/// `file:line:col: severity: message`
std::string format_diagnostic(const std::string& file, const Diagnostic& d);

/// Carries every diagnostic produced while rejecting a source text.
class FrontendError : public Error {
 public:
  explicit FrontendError(std::vector<Diagnostic> diags);
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }
  std::string render(const std::string& file) const;

 private:
  std::vector<Diagnostic> diags_;
};

class SyntaxError : public FrontendError {
 public:
  SyntaxError(Diagnostic d, std::vector<std::string> expected);
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::vector<std::string> expected_;
};

class SemanticError : public FrontendError {
 public:
  using FrontendError::FrontendError;
};

}  // namespace violet::confscript
