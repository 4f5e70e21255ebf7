#include "path_enum.hpp"

#include <algorithm>
#include <functional>
#include <vector>

namespace oracle {

using violet::confscript::Digraph;

Digraph random_cfg(std::mt19937_64& rng, int max_nodes) {
  std::uniform_int_distribution<int> size_dist(2, std::max(2, max_nodes));
  const int n = size_dist(rng);
  Digraph g;
  g.succ.assign(static_cast<std::size_t>(n), {});
  g.entry = 0;
  g.exit = n - 1;
  std::uniform_int_distribution<int> node(0, n - 1);
  std::bernoulli_distribution two(0.5);
  for (int v = 0; v + 1 < n; ++v) {
    auto& out = g.succ[static_cast<std::size_t>(v)];
    // Mostly forward edges so that the exit is usually reachable.
    std::uniform_int_distribution<int> ahead(v + 1, n - 1);
    out.push_back(ahead(rng));
    if (two(rng)) {
      int w = node(rng);
      if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
    }
  }
  return g;
}

namespace {

/// Calls `visit` with each simple path from `a` to the exit; stops early
/// when it returns false.
void each_path(const Digraph& g, int a, const std::function<bool(const std::vector<int>&)>& visit) {
  std::vector<int> path{a};
  std::vector<bool> on(static_cast<std::size_t>(g.size()), false);
  on[static_cast<std::size_t>(a)] = true;
  bool stop = false;
  std::function<void(int)> dfs = [&](int v) {
    if (stop) return;
    if (v == g.exit) {
      if (!visit(path)) stop = true;
      return;
    }
    for (int w : g.succ[static_cast<std::size_t>(v)]) {
      if (on[static_cast<std::size_t>(w)]) continue;
      on[static_cast<std::size_t>(w)] = true;
      path.push_back(w);
      dfs(w);
      path.pop_back();
      on[static_cast<std::size_t>(w)] = false;
    }
  };
  dfs(a);
}

}  // namespace

bool postdominates_by_paths(const Digraph& g, int b, int a) {
  bool all = true;
  each_path(g, a, [&](const std::vector<int>& p) {
    all = std::find(p.begin(), p.end(), b) != p.end();
    return all;
  });
  return all;
}

std::int64_t count_exit_paths(const Digraph& g, int a) {
  std::int64_t n = 0;
  each_path(g, a, [&](const std::vector<int>&) {
    ++n;
    return true;
  });
  return n;
}

}  // namespace oracle
