#pragma once

#include <map>
#include <vector>

#include "violet/analysis/postdom.hpp"
#include "violet/confscript/ast.hpp"
#include "violet/confscript/cfg.hpp"

namespace violet::analysis {

/// Statement-level control dependence for one function.
///
/// Two relations are combined:
///  - classic: Y depends on branch X when some successor S of X's block is
///    postdominated by Y's block while X's block is not;
///  - chain: Y lies anywhere inside an if/else-if chain that contains X, so
///    every arm of `if (a) .. else if (b) .. else ..` depends on each test.
class ControlDependence {
 public:
  explicit ControlDependence(const confscript::FunctionDef& f);
  ControlDependence(const confscript::FunctionDef& f, Cfg cfg);

  /// Throws UnknownStatement if either id is not in the function. False when
  /// `x` is not an If/While.
  bool depends(int y, int x) const;
  bool classic(int y, int x) const;
  bool chain(int y, int x) const;

  const Cfg& cfg() const { return cfg_; }

 private:
  Cfg cfg_;
  PostDominatorTree pdt_;
  std::map<int, const confscript::Stmt*> stmts_;
  std::map<int, std::vector<int>> ancestors_;  // enclosing statement ids, innermost last
  std::map<int, int> chain_head_;              // If id -> head of its else-if chain

  void require(int id) const;
};

/// control_dependent(cfg, y, x) for a function's lowered CFG.
bool control_dependent(const confscript::FunctionDef& f, int y, int x);

}  // namespace violet::analysis
