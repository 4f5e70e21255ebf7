#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "violet/confscript/ast.hpp"
#include "violet/symexec/expr.hpp"
#include "violet/trace/records.hpp"

namespace violet::symexec {

enum class AtomOrigin { Domain, Branch, Concretization };
const char* to_string(AtomOrigin o);

struct Atom {
  ExprPtr expr;
  AtomOrigin origin = AtomOrigin::Branch;
  int stmt = -1;  // statement that produced it, -1 for domain atoms
};

/// Conjunction of atoms accumulated along one path.
struct PathConstraint {
  std::vector<Atom> atoms;

  std::vector<ExprPtr> exprs() const;
  /// Atoms other than domain-range seeds.
  std::vector<ExprPtr> decision_exprs() const;
  void add(ExprPtr e, AtomOrigin origin, int stmt = -1) {
    atoms.push_back({std::move(e), origin, stmt});
  }
};

/// A variable slot: a global (frame -1) or a local of a call frame.
struct Location {
  int frame = -1;
  std::string name;
  friend auto operator<=>(const Location&, const Location&) = default;
};

/// Which locations currently hold which symbolic expression node. Copies of
/// a value share the node, so binding one binds all of them.
class TaintMap {
 public:
  /// Records that `loc` now holds `value` (forgetting what it held before).
  void write(const Location& loc, const ExprPtr& value);
  void erase(const Location& loc);
  /// Forgets every location of frame `frame` and deeper.
  void erase_frames_from(int frame);
  std::vector<Location> holders(const ExprNode* node) const;
  std::size_t size() const { return by_loc_.size(); }

 private:
  std::map<const ExprNode*, std::set<Location>> by_expr_;
  std::map<Location, const ExprNode*> by_loc_;
};

/// Position inside a block of one frame.
struct Cursor {
  Cursor() = default;
  explicit Cursor(const confscript::Block* b) : block(b) {}

  const confscript::Block* block = nullptr;
  std::size_t pos = 0;
  /// Set when this cursor runs a loop body.
  const confscript::Stmt* loop = nullptr;
  std::int64_t iteration = 0;
  std::vector<std::string> declared;
};

struct Frame {
  const confscript::FunctionDef* fn = nullptr;
  std::map<std::string, ExprPtr> locals;
  std::vector<Cursor> cursors;
  /// Caller statement that made this call (-1 for the entry frame).
  int callsite = -1;
  /// Caller local receiving the return value, if any.
  std::optional<std::string> result_target;
  bool result_declares = false;
  /// Open call record id while tracing, 0 otherwise.
  int cid = 0;
};

enum class StateStatus { Running, Terminated, BudgetExceeded };
const char* to_string(StateStatus s);

struct ExecState {
  int id = 0;
  StateStatus status = StateStatus::Running;
  std::string status_detail;

  std::map<std::string, ExprPtr> globals;
  std::vector<Frame> frames;
  PathConstraint constraint;
  TaintMap taint;

  trace::CostVector cost;
  std::int64_t clock = 0;
  std::int64_t steps = 0;
  bool tracing = false;
  std::int64_t window_instructions = 0;
  int next_cid = 1;
  trace::RawTrace trace;

  /// Dynamic call-stack parent of each call record (0 for a root).
  std::map<int, int> stack_parent;
  /// Branch statements executed with the outcome taken.
  std::vector<std::pair<int, bool>> decisions;
  /// Calls made so far per pure extern on this path (names fresh returns).
  std::map<std::string, int> fresh_counter;
  std::vector<VarId> internal_vars;

  bool running() const { return status == StateStatus::Running; }
};

/// Exploration limits.
struct Budget {
  std::int64_t max_states = 4096;
  std::int64_t max_latency = 1'000'000;
  std::int64_t max_steps = 10'000'000;
  std::int64_t max_call_depth = 256;
  friend bool operator==(const Budget&, const Budget&) = default;
};

}  // namespace violet::symexec
