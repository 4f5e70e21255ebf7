#pragma once

#include <vector>

#include "violet/confscript/cfg.hpp"

namespace violet::analysis {

using confscript::Cfg;
using confscript::Digraph;

/// Postdominator tree of a Digraph, computed with the Cooper/Harvey/Kennedy
/// iterative scheme on the reversed graph.
///
/// Nodes that cannot reach the exit have no immediate postdominator; every
/// node vacuously postdominates them.
class PostDominatorTree {
 public:
  explicit PostDominatorTree(const Digraph& g);

  /// -1 for the exit node and for nodes that cannot reach the exit.
  int immediate_postdominator(int node) const { return ipdom_.at(static_cast<std::size_t>(node)); }
  bool reaches_exit(int node) const { return order_.at(static_cast<std::size_t>(node)) >= 0; }

  /// True iff every path from `a` to the exit contains `b` (reflexive).
  bool postdominates(int b, int a) const;

  int size() const { return static_cast<int>(ipdom_.size()); }

 private:
  std::vector<int> ipdom_;
  std::vector<int> order_;  // reverse-postorder index on the reversed graph, -1 if unreached
  int exit_ = 0;
};

/// postdominates(cfg, b, a): every a->exit path contains b. Throws UnknownNode.
bool postdominates(const Cfg& cfg, int b, int a);
bool postdominates(const Digraph& g, int b, int a);

}  // namespace violet::analysis
