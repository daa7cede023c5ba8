#pragma once

#include <memory>
#include <string>
#include <vector>

#include "setsynth/ir.hpp"
#include "setsynth/oracle.hpp"
#include "setsynth/runtime.hpp"

namespace setsynth::rt {

// Executes synthesized code against a host evaluator: plural functions run
// over search trees whose leaves suspend host heap cells. Trees produced by
// a machine must not outlive its host evaluator.
class Machine : public std::enable_shared_from_this<Machine> {
 public:
  Machine(std::shared_ptr<const ir::IrBundle> bundle, oracle::Evaluator& host);

  const ir::IrBundle& bundle() const { return *bundle_; }
  const NfFn& nf() const { return nf_; }

  // The argument conversion into a search tree: an unevaluated suspension
  // over a host cell; forcing yields a head whose children suspend in turn.
  Tree to_st(oracle::CellId cell);

  // Calls a plural (or plural-set) function with a fresh supply at level 1.
  Tree call_plural(const std::string& name, std::vector<Tree> args);

  // The body of a set-function application: convert the arguments, run the
  // plural function at level 1, collect level-1 values. The result is a tree
  // of value lists with only outer (level-0) structure remaining.
  Tree set_function_collected(const std::string& target, const std::vector<oracle::CellId>& args);

  // Extraction of the final results from a collected tree.
  std::vector<World> worlds(Tree collected, Strategy strategy, size_t max_worlds,
                            size_t max_values_per_world) const;

  // Registers this machine as the host's set-function implementation.
  static void install(const std::shared_ptr<Machine>& m);

 private:
  struct Frame;
  using RtValue = std::variant<Tree, IdSupply, ChoiceId, std::int64_t>;
  using Env = std::vector<RtValue>;
  using EnvPtr = std::shared_ptr<const Env>;

  RtValue eval(const ir::IrExprPtr& e, const EnvPtr& env);
  Tree eval_tree(const ir::IrExprPtr& e, const EnvPtr& env);
  Tree lazy_tree(const ir::IrExprPtr& e, const EnvPtr& env);
  std::int64_t eval_int(const ir::IrExprPtr& e, const EnvPtr& env);
  SuspensionPtr suspend(oracle::CellId cell);

  std::shared_ptr<const ir::IrBundle> bundle_;
  oracle::Evaluator* host_;
  NfFn nf_;
  std::shared_ptr<std::uint64_t> local_ids_;
};

}  // namespace setsynth::rt
