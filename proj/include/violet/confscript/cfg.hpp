#pragma once

#include <map>
#include <string>
#include <vector>

#include "violet/confscript/ast.hpp"

namespace violet::confscript {

/// Plain directed graph with a distinguished entry and exit node.
struct Digraph {
  std::vector<std::vector<int>> succ;
  int entry = 0;
  int exit = 0;

  int size() const { return static_cast<int>(succ.size()); }
  std::vector<std::vector<int>> predecessors() const;
};

struct BasicBlock {
  enum class Kind { Entry, Exit, Plain, LoopHeader, Merge };
  int id = 0;
  Kind kind = Kind::Plain;
  /// Statement ids in execution order. A branch statement (If/While) is
  /// always the last statement of its block.
  std::vector<int> statements;
};

/// Intra-procedural control flow graph of one function.
struct Cfg {
  std::string function;
  std::vector<BasicBlock> blocks;
  Digraph graph;
  std::map<int, int> block_of;  // statement id -> block id

  int entry() const { return graph.entry; }
  int exit() const { return graph.exit; }
  /// Block holding a statement; throws UnknownStatement.
  int block_containing(int stmt_id) const;
};

/// Lowers every function with a body to a CFG (externs get entry -> exit).
///
/// If statements end their block and fan out to then/else blocks that join
/// in a Merge block; While expands to header, body and exit blocks; Return
/// jumps to the exit node.
std::map<std::string, Cfg> lower_to_cfg(const Program& program);

Cfg lower_function(const FunctionDef& f);

}  // namespace violet::confscript
