#include "violet/analysis/postdom.hpp"

#include <algorithm>

#include "violet/error.hpp"

namespace violet::analysis {

PostDominatorTree::PostDominatorTree(const Digraph& g)
    : ipdom_(static_cast<std::size_t>(g.size()), -1),
      order_(static_cast<std::size_t>(g.size()), -1),
      exit_(g.exit) {
  const int n = g.size();
  if (n == 0) return;
  // Reversed graph: successors of v are the CFG predecessors of v.
  auto rsucc = g.predecessors();

  // Postorder DFS from exit over the reversed graph (iterative).
  std::vector<int> postorder;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<std::pair<int, std::size_t>> stack{{g.exit, 0}};
  seen[static_cast<std::size_t>(g.exit)] = 1;
  while (!stack.empty()) {
    auto& [v, i] = stack.back();
    const auto& next = rsucc[static_cast<std::size_t>(v)];
    if (i < next.size()) {
      int w = next[i++];
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        stack.emplace_back(w, 0);
      }
    } else {
      postorder.push_back(v);
      stack.pop_back();
    }
  }
  std::vector<int> rpo(postorder.rbegin(), postorder.rend());
  // order_ holds postorder numbers: larger = closer to the root (exit).
  for (std::size_t i = 0; i < postorder.size(); ++i) order_[static_cast<std::size_t>(postorder[i])] = static_cast<int>(i);

  std::vector<int> idom(static_cast<std::size_t>(n), -1);
  idom[static_cast<std::size_t>(g.exit)] = g.exit;

  auto intersect = [&](int a, int b) {
    while (a != b) {
      while (order_[static_cast<std::size_t>(a)] < order_[static_cast<std::size_t>(b)]) a = idom[static_cast<std::size_t>(a)];
      while (order_[static_cast<std::size_t>(b)] < order_[static_cast<std::size_t>(a)]) b = idom[static_cast<std::size_t>(b)];
    }
    return a;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (int v : rpo) {
      if (v == g.exit) continue;
      // Predecessors in the reversed graph are the CFG successors.
      int new_idom = -1;
      for (int p : g.succ[static_cast<std::size_t>(v)]) {
        if (idom[static_cast<std::size_t>(p)] == -1) continue;
        new_idom = new_idom == -1 ? p : intersect(p, new_idom);
      }
      if (new_idom != -1 && idom[static_cast<std::size_t>(v)] != new_idom) {
        idom[static_cast<std::size_t>(v)] = new_idom;
        changed = true;
      }
    }
  }

  for (int v = 0; v < n; ++v)
    ipdom_[static_cast<std::size_t>(v)] = v == g.exit ? -1 : idom[static_cast<std::size_t>(v)];
}

bool PostDominatorTree::postdominates(int b, int a) const {
  if (a < 0 || b < 0 || a >= size() || b >= size())
    throw UnknownNode("node out of range");
  if (a == b) return true;
  if (!reaches_exit(a)) return true;  // no path from a to exit
  for (int v = a; v != -1; v = ipdom_[static_cast<std::size_t>(v)])
    if (v == b) return true;
  return false;
}

bool postdominates(const Digraph& g, int b, int a) {
  if (a < 0 || b < 0 || a >= g.size() || b >= g.size())
    throw UnknownNode("node " + std::to_string(std::max(a, b)) + " is not in the graph");
  return PostDominatorTree(g).postdominates(b, a);
}

bool postdominates(const Cfg& cfg, int b, int a) { return postdominates(cfg.graph, b, a); }

}  // namespace violet::analysis
