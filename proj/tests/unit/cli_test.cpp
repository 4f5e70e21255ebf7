#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "test_support.hpp"
#include "violet/cli/commands.hpp"
#include "violet/trace/state_trace.hpp"

using namespace violet;
using namespace violet::cli;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("violet-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  AnalyzeOptions autocommit(const std::string& out) {
    AnalyzeOptions o;
    o.program = corpus("autocommit.cfs");
    o.target = "autocommit";
    o.out_dir = dir_ / out;
    return o;
  }

  int analyze(const AnalyzeOptions& o) { return cmd_analyze(o, out_, err_); }

  fs::path dir_;
  std::ostringstream out_, err_;
};

std::string tree_text(const fs::path& root) {
  std::ostringstream all;
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) files.push_back(fs::relative(e.path(), root));
  std::sort(files.begin(), files.end());
  for (const auto& f : files) all << "== " << f.generic_string() << "\n" << read_file(root / f);
  return all.str();
}

}  // namespace

TEST_F(CliTest, AnalyzeWritesRunDirectory) {
  ASSERT_EQ(analyze(autocommit("run")), kExitOk) << err_.str();
  for (const char* f : {"manifest.txt", "model.json", "report.txt", "symbols.txt",
                        "traces/state-0000.trace", "traces/state-0015.trace"})
    EXPECT_TRUE(fs::exists(dir_ / "run" / f)) << f;
  auto manifest = read_file(dir_ / "run" / "manifest.txt");
  EXPECT_NE(manifest.find("symbolic_source: target"), std::string::npos);
  EXPECT_NE(manifest.find("symbolic: autocommit,binlog_format,flush_at_trx_commit,sql_command"),
            std::string::npos)
      << manifest;
  EXPECT_NE(manifest.find("states: 16"), std::string::npos);
  EXPECT_NE(out_.str().find("16 states"), std::string::npos);
}

TEST_F(CliTest, RunsAreByteIdentical) {
  ASSERT_EQ(analyze(autocommit("a")), kExitOk);
  ASSERT_EQ(analyze(autocommit("b")), kExitOk);
  EXPECT_EQ(tree_text(dir_ / "a"), tree_text(dir_ / "b"));
}

TEST_F(CliTest, RerunClearsStaleTraces) {
  ASSERT_EQ(analyze(autocommit("run")), kExitOk);
  auto o = autocommit("run");
  o.target.reset();
  o.concrete = true;
  ASSERT_EQ(analyze(o), kExitOk);
  EXPECT_FALSE(fs::exists(dir_ / "run" / "traces" / "state-0001.trace"));
}

TEST_F(CliTest, SymbolicSources) {
  auto p = load("autocommit.cfs");
  AnalyzeOptions o;
  o.env_sym = "binlog_format, autocommit";
  auto s = resolve_symbolic_set(p, o);
  EXPECT_EQ(s.source, SymSource::Environment);
  EXPECT_EQ(s.names, (std::set<std::string>{"autocommit", "binlog_format", "sql_command"}));

  o.sym = std::vector<std::string>{"flush_at_trx_commit"};
  s = resolve_symbolic_set(p, o);
  EXPECT_EQ(s.source, SymSource::Explicit);  // flags win over the environment
  EXPECT_EQ(s.names, (std::set<std::string>{"flush_at_trx_commit", "sql_command"}));

  o.concrete = true;
  EXPECT_THROW(resolve_symbolic_set(p, o), Error);

  AnalyzeOptions none;
  EXPECT_THROW(resolve_symbolic_set(p, none), Error);

  AnalyzeOptions conc;
  conc.concrete = true;
  EXPECT_TRUE(resolve_symbolic_set(p, conc).names.empty());
}

TEST_F(CliTest, RelatedFileFeedsTarget) {
  std::ostringstream rel;
  ASSERT_EQ(cmd_related(corpus("autocommit.cfs"), rel, err_), kExitOk);
  write_file(dir_ / "rel.txt", "autocommit\tenabler:\tinfluenced:\n");
  auto o = autocommit("run");
  o.related_file = dir_ / "rel.txt";
  auto s = resolve_symbolic_set(load("autocommit.cfs"), o);
  EXPECT_EQ(s.names, (std::set<std::string>{"autocommit", "sql_command"}));
  EXPECT_NE(rel.str().find("autocommit\tenabler:binlog_format\tinfluenced:flush_at_trx_commit"),
            std::string::npos);
}

TEST_F(CliTest, BadInputsAreMalformed) {
  auto o = autocommit("run");
  o.target = "no_such_config";
  EXPECT_EQ(analyze(o), kExitMalformed);

  write_file(dir_ / "broken.cfs", "fn main( {\n");
  AnalyzeOptions b;
  b.program = dir_ / "broken.cfs";
  b.concrete = true;
  b.out_dir = dir_ / "x";
  EXPECT_EQ(analyze(b), kExitMalformed);
  EXPECT_NE(err_.str().find("broken.cfs:1:"), std::string::npos) << err_.str();

  auto c = autocommit("run");
  c.config = dir_ / "missing.conf";
  EXPECT_EQ(analyze(c), kExitMalformed);

  write_file(dir_ / "bad.conf", "autocommit = maybe\n");
  c.config = dir_ / "bad.conf";
  EXPECT_EQ(analyze(c), kExitMalformed);
}

TEST_F(CliTest, CheckExitCodes) {
  ASSERT_EQ(analyze(autocommit("run")), kExitOk);
  CheckOptions c;
  c.mode = 1;
  c.model = dir_ / "run" / "model.json";
  c.old_config = fixture("autocommit_old.conf");
  c.new_config = fixture("autocommit_new.conf");
  EXPECT_EQ(cmd_check(c, out_, err_), kExitSpecious);
  EXPECT_NE(out_.str().find("fil_flush"), std::string::npos);

  c.new_config = fixture("autocommit_old.conf");
  EXPECT_EQ(cmd_check(c, out_, err_), kExitOk);

  c.new_config = fixture("autocommit_bad_value.conf");
  EXPECT_EQ(cmd_check(c, out_, err_), kExitMalformed);

  write_file(dir_ / "garbage.json", "{ nope");
  c.model = dir_ / "garbage.json";
  EXPECT_EQ(cmd_check(c, out_, err_), kExitMalformed);

  CheckOptions w;
  w.mode = 3;
  w.model = dir_ / "run" / "model.json";
  EXPECT_EQ(cmd_check(w, out_, err_), kExitMalformed);  // neither models nor workloads
  w.old_workload = "sql_command==SELECT";
  w.new_workload = "sql_command==INSERT";
  w.json = true;
  std::ostringstream js;
  EXPECT_EQ(cmd_check(w, js, err_), kExitSpecious);
  EXPECT_NE(js.str().find("violet-check v1"), std::string::npos);
}

TEST_F(CliTest, TraceDump) {
  ASSERT_EQ(analyze(autocommit("run")), kExitOk);
  std::ostringstream tree;
  ASSERT_EQ(cmd_trace_dump(dir_ / "run" / "traces" / "state-0000.trace", std::nullopt, tree, err_),
            kExitOk)
      << err_.str();
  EXPECT_EQ(tree.str().rfind("main", 0), 0u) << tree.str();
  EXPECT_NE(tree.str().find("fil_flush"), std::string::npos);
  write_file(dir_ / "bad.trace", "# x\nQ 1 2\n");
  EXPECT_EQ(cmd_trace_dump(dir_ / "bad.trace", dir_ / "run" / "symbols.txt", tree, err_),
            kExitMalformed);
}

TEST_F(CliTest, ParseAssignment) {
  auto p = load("autocommit.cfs");
  auto a = parse_assignment("autocommit = false  # off\nsql_command = UPDATE\n", p);
  EXPECT_EQ(a.at("autocommit"), 0);
  EXPECT_EQ(a.at("sql_command"), 2);
  EXPECT_THROW(parse_assignment("flush_at_trx_commit = 9\n", p), ConfigFileError);
}

TEST_F(CliTest, ConcreteRunHasOneRowAndNoPairs) {
  AnalyzeOptions o;
  o.program = corpus("autocommit.cfs");
  o.concrete = true;
  o.out_dir = dir_ / "run";
  ASSERT_EQ(analyze(o), kExitOk) << err_.str();
  auto m = impact::load_model(read_file(dir_ / "run" / "model.json"));
  EXPECT_EQ(m.rows.size(), 1u);
  EXPECT_TRUE(m.pairs.empty());
}

TEST_F(CliTest, TraceDumpIndentsByDepth) {
  ASSERT_EQ(analyze(autocommit("run")), kExitOk);
  auto path = dir_ / "run" / "traces" / "state-0000.trace";
  std::ostringstream tree;
  ASSERT_EQ(cmd_trace_dump(path, dir_ / "run" / "symbols.txt", tree, err_), kExitOk) << err_.str();

  auto raw = trace::parse_trace_file(read_file(path));
  auto calls = trace::build_call_tree(raw, trace::AddressMap::parse_symbols(read_file(dir_ / "run" / "symbols.txt")));
  std::map<int, std::optional<int>> parent;
  for (const auto& c : calls) parent[c.call.cid] = c.call.parent_id;

  std::istringstream lines(tree.str());
  std::string line;
  std::size_t i = 0;
  while (std::getline(lines, line)) {
    ASSERT_LT(i, calls.size());
    int depth = 0;
    for (auto p = parent.at(calls[i].call.cid); p; p = parent.at(*p)) ++depth;
    auto indent = line.find_first_not_of(' ');
    EXPECT_EQ(indent, static_cast<std::size_t>(2 * depth)) << line;
    ++i;
  }
  EXPECT_EQ(i, calls.size());
}
