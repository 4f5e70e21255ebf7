#pragma once

// Compares a symbolic exploration with brute-force concrete runs grouped by
// the branch outcomes they took.

#include <string>
#include <vector>

#include "concrete_interp.hpp"
#include "violet/symexec/engine.hpp"

namespace oracle {

struct EquivalenceReport {
  std::size_t runs = 0;
  std::size_t states = 0;
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

/// For every run: exactly one state has its decision sequence, that state's
/// constraint holds on the run's values and no other state's does, and the
/// cost vectors and call parents agree. Every state must be hit by a run.
EquivalenceReport check_equivalence(const violet::symexec::ExplorationResult& result,
                                    const std::vector<EnumeratedRun>& runs);

}  // namespace oracle
