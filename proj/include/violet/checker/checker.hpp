#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "violet/impact/model.hpp"

namespace violet::checker {

using impact::CostTableRow;
using impact::ImpactModel;

/// Concrete values by parameter name. Configs missing from a file take the
/// model's defaults.
struct ConcreteConfig {
  std::map<std::string, std::int64_t> values;
  friend bool operator==(const ConcreteConfig&, const ConcreteConfig&) = default;
};

/// `name = value` lines; `#` starts a comment. Values are written as in
/// ConfScript (`true`, `2`, `ROW`). Throws ConfigFileError for unknown names,
/// malformed lines and out-of-domain values (invalid, not specious).
ConcreteConfig parse_config(const std::string& text, const ImpactModel& model);

/// Every config at its default value.
ConcreteConfig default_config(const ImpactModel& model);

/// Rows whose configuration constraint holds under `config`. Variables the
/// config does not fix (inputs, extern returns in mixed atoms) are
/// existential.
std::vector<const CostTableRow*> locate_rows(const ImpactModel& model,
                                             const ConcreteConfig& config);

/// Smallest input assignment (domain order) satisfying the atoms. Throws
/// UnsatPredicate.
std::map<std::string, std::int64_t> generate_test_case(const std::vector<std::string>& predicate,
                                                       const ImpactModel& model);

enum class Verdict { Ok, Specious, OutsideExploredSpace };
const char* to_string(Verdict v);
/// 0 ok, 2 specious, 3 outside the explored space.
int exit_code(Verdict v);

struct Evidence {
  int slow_row = 0;
  int fast_row = 0;
  trace::Metric metric = trace::Metric::Latency;
  double ratio = 0;
  std::string slow_constraint;
  std::string fast_constraint;
  std::int64_t slow_value = 0;
  std::int64_t fast_value = 0;
  std::vector<std::string> critical_chain;
};

struct CheckReport {
  int mode = 1;
  Verdict verdict = Verdict::Ok;
  std::string summary;
  std::optional<Evidence> evidence;
  /// Input assignment that reaches the slow row, rendered values.
  std::optional<std::map<std::string, std::string>> test_case;
  std::vector<std::string> notes;
};

/// Mode 1: does moving from `old_cfg` to `new_cfg` slow some workload down
/// by more than the threshold?
CheckReport check_update(const ImpactModel& model, const ConcreteConfig& old_cfg,
                         const ConcreteConfig& new_cfg, double threshold_percent);

/// Mode 2: is some row satisfying the defaults the slow side of a pair
/// against a row that does not satisfy them?
CheckReport check_default(const ImpactModel& model, const ConcreteConfig& defaults,
                          double threshold_percent);

/// Mode 3, code change: rows with the same constraint text in both models;
/// flags rows that got slower. `config`, when given, limits the comparison
/// to rows it satisfies in either model.
CheckReport check_code_upgrade(const ImpactModel& old_model, const ImpactModel& new_model,
                               const std::optional<ConcreteConfig>& config,
                               double threshold_percent);

/// Mode 3, workload change: rows matching `config` whose input predicate is
/// compatible with the new workload against those compatible with the old.
CheckReport check_workload_shift(const ImpactModel& model, const ConcreteConfig& config,
                                 const std::vector<std::string>& old_predicate,
                                 const std::vector<std::string>& new_predicate,
                                 double threshold_percent);

std::string render_text(const CheckReport& report);
/// Same tree serialization family as models (`violet-check v1`).
std::string render_json(const CheckReport& report);

/// Splits `a && b` into atom texts (for predicates given on the command line).
std::vector<std::string> split_predicate(const std::string& text);

}  // namespace violet::checker
