#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "setsynth/ast.hpp"
#include "setsynth/ir.hpp"
#include "setsynth/runtime.hpp"
#include "setsynth/value.hpp"

namespace setsynth::drive {

enum class Mode { Synth, Oracle, Diff };

struct Options {
  Mode mode = Mode::Synth;
  rt::Strategy strategy = rt::Strategy::Dfs;
  std::optional<size_t> max_values;
  int depth_bound = 16;
  bool supply_threading = true;
};

struct Result {
  enum class Kind { Worlds, Values, TreeDump, Diff };
  Kind kind = Kind::Values;

  std::vector<rt::World> worlds;  // synthesized set-function application
  ValueMultiset values;           // plain expression results
  bool truncated = false;
  std::string tree_dump;          // plural-function entry

  // diff mode
  bool match = false;
  bool compared_sets = false;  // entry was a set-function application
  std::vector<ValueMultiset> synth_side, oracle_side;  // normalized for comparison
};

// Every function whose set function is referenced by the program or the
// entry expression; these become synthesis targets.
std::vector<std::string> referenced_set_functions(const Program& p, const ExprPtr& entry);

std::shared_ptr<const ir::IrBundle> build_bundle(const Program& p, const ExprPtr& entry,
                                                 const Options& opts);

Result run_entry(const Program& p, const ExprPtr& entry, const Options& opts);

}  // namespace setsynth::drive
