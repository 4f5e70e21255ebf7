#include "violet/analysis/control_dep.hpp"

#include <algorithm>

#include "violet/error.hpp"

namespace violet::analysis {

using confscript::Block;
using confscript::Stmt;

ControlDependence::ControlDependence(const confscript::FunctionDef& f)
    : ControlDependence(f, confscript::lower_function(f)) {}

ControlDependence::ControlDependence(const confscript::FunctionDef& f, Cfg cfg)
    : cfg_(std::move(cfg)), pdt_(cfg_.graph) {
  std::vector<int> path;
  auto walk = [&](auto&& self, const Block& b) -> void {
    for (const auto& s : b) {
      stmts_[s.id] = &s;
      ancestors_[s.id] = path;
      path.push_back(s.id);
      self(self, s.then_block);
      self(self, s.else_block);
      path.pop_back();
      if (s.kind == Stmt::Kind::If && s.else_block.size() == 1 &&
          s.else_block[0].kind == Stmt::Kind::If)
        chain_head_[s.else_block[0].id] = s.id;  // provisional parent link
    }
  };
  walk(walk, f.body);

  // Resolve parent links to chain heads.
  for (auto& [id, stmt] : stmts_) {
    if (stmt->kind != Stmt::Kind::If) continue;
    int head = id;
    for (auto it = chain_head_.find(head); it != chain_head_.end() && it->second != head;
         it = chain_head_.find(head))
      head = it->second;
    chain_head_[id] = head;
  }
}

void ControlDependence::require(int id) const {
  if (!stmts_.count(id))
    throw UnknownStatement("statement " + std::to_string(id) + " is not in function '" +
                           cfg_.function + "'");
}

bool ControlDependence::classic(int y, int x) const {
  require(y);
  require(x);
  if (!stmts_.at(x)->is_branch()) return false;
  int bx = cfg_.block_containing(x);
  int by = cfg_.block_containing(y);
  if (pdt_.postdominates(by, bx)) return false;
  for (int s : cfg_.graph.succ[static_cast<std::size_t>(bx)])
    if (pdt_.postdominates(by, s)) return true;
  return false;
}

bool ControlDependence::chain(int y, int x) const {
  require(y);
  require(x);
  if (stmts_.at(x)->kind != Stmt::Kind::If) return false;
  int head = chain_head_.at(x);
  const auto& anc = ancestors_.at(y);
  return std::find(anc.begin(), anc.end(), head) != anc.end();
}

bool ControlDependence::depends(int y, int x) const { return classic(y, x) || chain(y, x); }

bool control_dependent(const confscript::FunctionDef& f, int y, int x) {
  return ControlDependence(f).depends(y, x);
}

}  // namespace violet::analysis
