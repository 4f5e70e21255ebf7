#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "violet/confscript/ast.hpp"
#include "violet/symexec/engine.hpp"
#include "violet/symexec/state.hpp"

namespace violet::cli {

/// Process exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitSpecious = 2;
inline constexpr int kExitOutside = 3;
inline constexpr int kExitMalformed = 4;

/// `name = value` lines over a program's configs and inputs.
/// Throws ConfigFileError.
symexec::ConcreteAssignment parse_assignment(const std::string& text,
                                             const confscript::Program& program);

/// Where the symbolic set comes from. Exactly one source is active.
enum class SymSource { Target, Explicit, Environment, Concrete };
const char* to_string(SymSource s);

struct AnalyzeOptions {
  std::filesystem::path program;
  std::optional<std::filesystem::path> config;
  std::optional<std::string> target;
  /// Related-configs file from `related`; used with `target` instead of
  /// running the static analysis again.
  std::optional<std::filesystem::path> related_file;
  std::optional<std::vector<std::string>> sym;
  bool concrete = false;
  /// Value of VIO_SYM_CONFIGS, if set.
  std::optional<std::string> env_sym;
  symexec::Budget budget;
  double threshold_percent = 100;
  std::filesystem::path out_dir;
};

/// Symbolic names and the source that produced them. Inputs are always
/// added except for concrete runs. Throws Error when no source or more than
/// one flag source is given.
struct SymbolicSet {
  SymSource source = SymSource::Concrete;
  std::set<std::string> names;
  std::string target;
  std::set<std::string> related;
};
SymbolicSet resolve_symbolic_set(const confscript::Program& program, const AnalyzeOptions& opts);

struct CheckOptions {
  int mode = 1;
  std::filesystem::path model;
  std::optional<std::filesystem::path> old_model;
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> old_config;
  std::optional<std::filesystem::path> new_config;
  std::optional<std::string> old_workload;
  std::optional<std::string> new_workload;
  double threshold_percent = 100;
  bool json = false;
};

/// Each command writes its normal output to `out` and diagnostics to `err`
/// and returns the process exit code.
int cmd_related(const std::filesystem::path& program, std::ostream& out, std::ostream& err);
int cmd_analyze(const AnalyzeOptions& opts, std::ostream& out, std::ostream& err);
int cmd_check(const CheckOptions& opts, std::ostream& out, std::ostream& err);
/// `symbols` defaults to symbols.txt in the trace's parent run directory.
int cmd_trace_dump(const std::filesystem::path& trace,
                   const std::optional<std::filesystem::path>& symbols, std::ostream& out,
                   std::ostream& err);

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, const std::string& text);

}  // namespace violet::cli
