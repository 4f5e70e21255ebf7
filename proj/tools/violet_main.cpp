// violet: configuration performance analysis for ConfScript programs.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "violet/cli/commands.hpp"

#ifndef VIOLET_VERSION
#define VIOLET_VERSION "0.0.0"
#endif

using namespace violet;

int main(int argc, char** argv) {
  CLI::App app{"violet: find configuration values that cause performance problems"};
  app.set_version_flag("--version", VIOLET_VERSION);
  app.require_subcommand(1);

  // related
  std::string related_program;
  auto* related = app.add_subcommand("related", "print enabler/influenced configs per config");
  related->add_option("program", related_program, "ConfScript program")->required();

  // analyze
  cli::AnalyzeOptions an;
  std::string an_program, an_config, an_target, an_related, an_out = "violet-run";
  std::vector<std::string> an_sym;
  auto* analyze = app.add_subcommand("analyze", "explore a program and build its impact model");
  analyze->add_option("program", an_program, "ConfScript program")->required();
  analyze->add_option("--config", an_config, "concrete values for non-symbolic parameters");
  auto* o_target = analyze->add_option("--target", an_target, "config to analyze (adds its related set)");
  auto* o_sym = analyze->add_option("--sym", an_sym, "explicit symbolic configs")->delimiter(',');
  auto* o_conc = analyze->add_flag("--concrete", an.concrete, "run with no symbolic variables");
  o_target->excludes(o_sym)->excludes(o_conc);
  o_sym->excludes(o_conc);
  analyze->add_option("--related-file", an_related, "related-configs file from `violet related`")
      ->needs(o_target);
  analyze->add_option("--max-states", an.budget.max_states)->check(CLI::PositiveNumber);
  analyze->add_option("--max-latency", an.budget.max_latency)->check(CLI::PositiveNumber);
  analyze->add_option("--max-steps", an.budget.max_steps)->check(CLI::PositiveNumber);
  analyze->add_option("--max-call-depth", an.budget.max_call_depth)->check(CLI::PositiveNumber);
  analyze->add_option("--threshold", an.threshold_percent, "suspicious-pair threshold in percent")
      ->check(CLI::NonNegativeNumber);
  analyze->add_option("--out", an_out, "run directory")->capture_default_str();

  // check
  cli::CheckOptions ck;
  std::string ck_model, ck_old_model, ck_config, ck_old_config, ck_new_config, ck_old_wl, ck_new_wl;
  auto* check = app.add_subcommand("check", "validate configurations against an impact model");
  check->add_option("--mode", ck.mode, "1 update, 2 default value, 3 code or workload change")
      ->check(CLI::Range(1, 3))
      ->required();
  check->add_option("--model", ck_model, "impact model (model.json)")->required();
  check->add_option("--old-model", ck_old_model, "model of the previous code version (mode 3)");
  check->add_option("--config", ck_config, "configuration file (modes 2, 3)");
  check->add_option("--old-config", ck_old_config, "configuration before the update (mode 1)");
  check->add_option("--new-config", ck_new_config, "configuration after the update (mode 1)");
  check->add_option("--old-workload", ck_old_wl, "old input predicate, e.g. `sql_command==SELECT`");
  check->add_option("--new-workload", ck_new_wl, "new input predicate");
  check->add_option("--threshold", ck.threshold_percent, "threshold in percent")
      ->check(CLI::NonNegativeNumber);
  check->add_flag("--json", ck.json, "emit the report as JSON");

  // trace-dump
  std::string td_trace, td_symbols;
  auto* dump = app.add_subcommand("trace-dump", "print the call tree of a trace file");
  dump->add_option("trace", td_trace, "trace file")->required();
  dump->add_option("--symbols", td_symbols, "symbols file (default: ../symbols.txt)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kExitMalformed;
  }

  auto opt = [](const std::string& s) -> std::optional<std::filesystem::path> {
    if (s.empty()) return std::nullopt;
    return std::filesystem::path(s);
  };

  if (*related) return cli::cmd_related(related_program, std::cout, std::cerr);

  if (*analyze) {
    an.program = an_program;
    an.config = opt(an_config);
    if (*o_target) an.target = an_target;
    if (*o_sym) an.sym = an_sym;
    an.related_file = opt(an_related);
    if (const char* env = std::getenv("VIO_SYM_CONFIGS")) an.env_sym = env;
    an.out_dir = an_out;
    return cli::cmd_analyze(an, std::cout, std::cerr);
  }

  if (*check) {
    ck.model = ck_model;
    ck.old_model = opt(ck_old_model);
    ck.config = opt(ck_config);
    ck.old_config = opt(ck_old_config);
    ck.new_config = opt(ck_new_config);
    if (!ck_old_wl.empty()) ck.old_workload = ck_old_wl;
    if (!ck_new_wl.empty()) ck.new_workload = ck_new_wl;
    return cli::cmd_check(ck, std::cout, std::cerr);
  }

  return cli::cmd_trace_dump(td_trace, opt(td_symbols), std::cout, std::cerr);
}
