#include "violet/cli/commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "violet/analysis/related.hpp"
#include "violet/checker/checker.hpp"
#include "violet/confscript/parser.hpp"
#include "violet/error.hpp"
#include "violet/impact/model.hpp"
#include "violet/trace/state_trace.hpp"

#ifndef VIOLET_VERSION
#define VIOLET_VERSION "0.0.0"
#endif

namespace violet::cli {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (auto t = trim(item); !t.empty()) out.push_back(t);
  return out;
}

std::string join(const std::set<std::string>& xs) {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : ",") + x;
  return out;
}

/// Inputs the user could not fix: missing files, malformed text.
bool malformed(const std::exception& e) {
  return dynamic_cast<const ModelFormatError*>(&e) || dynamic_cast<const ConfigFileError*>(&e) ||
         dynamic_cast<const TraceFormatError*>(&e) || dynamic_cast<const UnknownName*>(&e) ||
         dynamic_cast<const UnknownConfig*>(&e) || dynamic_cast<const UnsatInitialConfig*>(&e) ||
         dynamic_cast<const confscript::FrontendError*>(&e);
}

template <typename F>
int guarded(std::ostream& err, const std::string& file, F&& body) {
  try {
    return body();
  } catch (const confscript::FrontendError& e) {
    err << e.render(file);
    return kExitMalformed;
  } catch (const std::exception& e) {
    err << "violet: " << e.what() << "\n";
    return malformed(e) ? kExitMalformed : kExitError;
  }
}

}  // namespace

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigFileError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + p.string());
  out << text;
  if (!out) throw Error("write failed: " + p.string());
}

symexec::ConcreteAssignment parse_assignment(const std::string& text,
                                             const confscript::Program& program) {
  symexec::ConcreteAssignment out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    auto where = "line " + std::to_string(lineno) + ": ";
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigFileError(where + "expected `name = value`");
    auto name = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    const auto* d = program.global_domain(name);
    if (!d) throw ConfigFileError(where + "unknown parameter '" + name + "'");
    auto v = d->parse_value(value);
    if (!v)
      throw ConfigFileError(where + "invalid value '" + value + "' for " + name + " (domain " +
                            d->to_string() + ")");
    out[name] = *v;
  }
  return out;
}

const char* to_string(SymSource s) {
  switch (s) {
    case SymSource::Target: return "target";
    case SymSource::Explicit: return "explicit";
    case SymSource::Environment: return "environment";
    case SymSource::Concrete: return "concrete";
  }
  return "?";
}

SymbolicSet resolve_symbolic_set(const confscript::Program& program, const AnalyzeOptions& opts) {
  int flags = (opts.target ? 1 : 0) + (opts.sym ? 1 : 0) + (opts.concrete ? 1 : 0);
  if (flags > 1) throw Error("--target, --sym and --concrete are mutually exclusive");
  if (opts.related_file && !opts.target) throw Error("--related-file needs --target");

  SymbolicSet s;
  std::vector<std::string> configs;
  if (opts.target) {
    s.source = SymSource::Target;
    s.target = *opts.target;
    if (!program.find_config(s.target)) throw UnknownConfig("unknown config '" + s.target + "'");
    std::map<std::string, analysis::RelatedSet> rel;
    if (opts.related_file)
      rel = analysis::parse_related_report(read_file(*opts.related_file));
    else
      rel = analysis::get_related_configs(program);
    auto it = rel.find(s.target);
    if (it != rel.end()) s.related = it->second.related();
    configs.push_back(s.target);
    configs.insert(configs.end(), s.related.begin(), s.related.end());
  } else if (opts.sym) {
    s.source = SymSource::Explicit;
    configs = *opts.sym;
  } else if (opts.concrete) {
    s.source = SymSource::Concrete;
  } else if (opts.env_sym) {
    s.source = SymSource::Environment;
    configs = split_list(*opts.env_sym);
  } else {
    throw Error("no symbolic set: give --target, --sym, --concrete or set VIO_SYM_CONFIGS");
  }
  for (const auto& c : configs) {
    if (!program.find_config(c)) throw UnknownConfig("unknown config '" + c + "'");
    s.names.insert(c);
  }
  if (s.source != SymSource::Concrete)
    for (const auto& in : program.inputs) s.names.insert(in.name);
  return s;
}

int cmd_related(const fs::path& program, std::ostream& out, std::ostream& err) {
  return guarded(err, program.string(), [&] {
    auto p = confscript::parse_file(program.string());
    out << analysis::format_related_report(p, analysis::get_related_configs(p));
    return kExitOk;
  });
}

int cmd_analyze(const AnalyzeOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, opts.program.string(), [&] {
    auto program = confscript::parse_file(opts.program.string());
    symexec::ConcreteAssignment config;
    if (opts.config) config = parse_assignment(read_file(*opts.config), program);
    auto sym = resolve_symbolic_set(program, opts);

    auto result = symexec::explore(program, config, sym.names, opts.budget);
    auto traces = trace::finalize_all(result);
    impact::ModelInputs in{opts.program.stem().string(), sym.target, sym.related,
                           opts.threshold_percent};
    auto model = impact::build_model(program, result, traces, in);

    // Stale traces from an earlier run would not be referenced by the model.
    const fs::path dir = opts.out_dir;
    fs::remove_all(dir / "traces");
    fs::create_directories(dir / "traces");
    for (const auto& t : traces)
      write_file(dir / impact::trace_file_name(t.state_id),
                 trace::write_trace_file(t.raw, t.state_id, symexec::to_string(t.status)));
    write_file(dir / "symbols.txt", result.addresses.to_symbols());
    write_file(dir / "model.json", impact::serialize_model(model));
    write_file(dir / "report.txt", impact::render_report(model));

    std::ostringstream m;
    m << "tool: violet " << VIOLET_VERSION << "\n";
    m << "program: " << opts.program.generic_string() << "\n";
    m << "config: " << (opts.config ? opts.config->generic_string() : "-") << "\n";
    m << "symbolic_source: " << to_string(sym.source) << "\n";
    m << "target: " << (sym.target.empty() ? "-" : sym.target) << "\n";
    m << "related: " << join(sym.related) << "\n";
    m << "symbolic: " << join(sym.names) << "\n";
    m << "max_states: " << opts.budget.max_states << "\n";
    m << "max_latency: " << opts.budget.max_latency << "\n";
    m << "max_steps: " << opts.budget.max_steps << "\n";
    m << "max_call_depth: " << opts.budget.max_call_depth << "\n";
    m << "threshold_percent: " << opts.threshold_percent << "\n";
    m << "states: " << result.states.size() << "\n";
    m << "exhausted: " << (result.exhausted ? result.exhausted_reason : "no") << "\n";
    write_file(dir / "manifest.txt", m.str());

    out << result.states.size() << " states, " << model.pairs.size() << " suspicious flags";
    if (result.exhausted) out << " (partial: " << result.exhausted_reason << ")";
    out << "; wrote " << dir.generic_string() << "\n";
    return kExitOk;
  });
}

int cmd_check(const CheckOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, opts.model.string(), [&] {
    auto model = impact::load_model(read_file(opts.model));
    auto config_or_defaults = [&](const std::optional<fs::path>& p) {
      return p ? checker::parse_config(read_file(*p), model) : checker::default_config(model);
    };
    checker::CheckReport report;
    switch (opts.mode) {
      case 1:
        if (!opts.old_config || !opts.new_config)
          throw ConfigFileError("mode 1 needs --old-config and --new-config");
        report = checker::check_update(model, checker::parse_config(read_file(*opts.old_config), model),
                                       checker::parse_config(read_file(*opts.new_config), model),
                                       opts.threshold_percent);
        break;
      case 2:
        report = checker::check_default(model, config_or_defaults(opts.config), opts.threshold_percent);
        break;
      case 3:
        if (opts.old_model) {
          auto old_model = impact::load_model(read_file(*opts.old_model));
          std::optional<checker::ConcreteConfig> cfg;
          if (opts.config) cfg = checker::parse_config(read_file(*opts.config), model);
          report = checker::check_code_upgrade(old_model, model, cfg, opts.threshold_percent);
        } else {
          if (!opts.old_workload || !opts.new_workload)
            throw ConfigFileError("mode 3 needs --old-model or --old-workload/--new-workload");
          report = checker::check_workload_shift(
              model, config_or_defaults(opts.config), checker::split_predicate(*opts.old_workload),
              checker::split_predicate(*opts.new_workload), opts.threshold_percent);
        }
        break;
      default:
        throw ConfigFileError("unknown mode " + std::to_string(opts.mode));
    }
    out << (opts.json ? checker::render_json(report) : checker::render_text(report));
    return checker::exit_code(report.verdict);
  });
}

int cmd_trace_dump(const fs::path& trace, const std::optional<fs::path>& symbols,
                   std::ostream& out, std::ostream& err) {
  return guarded(err, trace.string(), [&] {
    auto raw = trace::parse_trace_file(read_file(trace));
    fs::path sym = symbols ? *symbols : trace.parent_path().parent_path() / "symbols.txt";
    auto addrs = trace::AddressMap::parse_symbols(read_file(sym));
    out << trace::render_call_tree(trace::build_call_tree(raw, addrs));
    return kExitOk;
  });
}

}  // namespace violet::cli
