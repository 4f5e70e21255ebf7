#include "violet/confscript/cfg.hpp"

#include "violet/error.hpp"

namespace violet::confscript {

std::vector<std::vector<int>> Digraph::predecessors() const {
  std::vector<std::vector<int>> pred(succ.size());
  for (int n = 0; n < size(); ++n)
    for (int s : succ[static_cast<std::size_t>(n)]) pred[static_cast<std::size_t>(s)].push_back(n);
  return pred;
}

int Cfg::block_containing(int stmt_id) const {
  auto it = block_of.find(stmt_id);
  if (it == block_of.end())
    throw UnknownStatement("statement " + std::to_string(stmt_id) + " is not in function '" +
                           function + "'");
  return it->second;
}

namespace {

class Lowering {
 public:
  explicit Lowering(const FunctionDef& f) { cfg_.function = f.name; }

  Cfg run(const FunctionDef& f) {
    int entry = new_block(BasicBlock::Kind::Entry);
    exit_ = new_block(BasicBlock::Kind::Exit);
    cfg_.graph.entry = entry;
    cfg_.graph.exit = exit_;
    if (f.is_extern) {
      edge(entry, exit_);
      return std::move(cfg_);
    }
    int first = new_block(BasicBlock::Kind::Plain);
    edge(entry, first);
    int last = lower_block(f.body, first);
    edge(last, exit_);
    return std::move(cfg_);
  }

 private:
  Cfg cfg_;
  int exit_ = 0;

  int new_block(BasicBlock::Kind kind) {
    int id = static_cast<int>(cfg_.blocks.size());
    cfg_.blocks.push_back(BasicBlock{id, kind, {}});
    cfg_.graph.succ.emplace_back();
    return id;
  }

  void edge(int from, int to) { cfg_.graph.succ[static_cast<std::size_t>(from)].push_back(to); }

  void place(const Stmt& s, int block) {
    cfg_.blocks[static_cast<std::size_t>(block)].statements.push_back(s.id);
    cfg_.block_of[s.id] = block;
  }

  // Lowers `b` starting in block `cur`; returns the block control falls out of.
  int lower_block(const Block& b, int cur) {
    for (const auto& s : b) cur = lower_stmt(s, cur);
    return cur;
  }

  int lower_stmt(const Stmt& s, int cur) {
    switch (s.kind) {
      case Stmt::Kind::If: {
        place(s, cur);
        int then_b = new_block(BasicBlock::Kind::Plain);
        int else_b = new_block(BasicBlock::Kind::Plain);
        edge(cur, then_b);
        edge(cur, else_b);
        int then_end = lower_block(s.then_block, then_b);
        int else_end = lower_block(s.else_block, else_b);
        int merge = new_block(BasicBlock::Kind::Merge);
        edge(then_end, merge);
        edge(else_end, merge);
        return merge;
      }
      case Stmt::Kind::While: {
        int header = new_block(BasicBlock::Kind::LoopHeader);
        edge(cur, header);
        place(s, header);
        int body = new_block(BasicBlock::Kind::Plain);
        int after = new_block(BasicBlock::Kind::Plain);
        edge(header, body);
        edge(header, after);
        int body_end = lower_block(s.then_block, body);
        edge(body_end, header);
        return after;
      }
      case Stmt::Kind::Return: {
        place(s, cur);
        edge(cur, exit_);
        // Anything after a return is unreachable but still gets a block.
        return new_block(BasicBlock::Kind::Plain);
      }
      default:
        place(s, cur);
        return cur;
    }
  }
};

}  // namespace

Cfg lower_function(const FunctionDef& f) { return Lowering(f).run(f); }

std::map<std::string, Cfg> lower_to_cfg(const Program& program) {
  std::map<std::string, Cfg> out;
  for (const auto& f : program.functions) out.emplace(f.name, lower_function(f));
  return out;
}

}  // namespace violet::confscript
