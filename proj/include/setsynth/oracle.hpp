#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "setsynth/ast.hpp"
#include "setsynth/tree.hpp"
#include "setsynth/value.hpp"

namespace setsynth::oracle {

using CellId = std::uint32_t;

// Outcome of forcing a heap cell to head-normal form.
struct EvalOutcome {
  enum class Kind { Value, Failure, Split };
  Kind kind = Kind::Failure;
  // Value: either an integer or a constructor whose arguments are cells
  bool is_int = false;
  std::int64_t num = 0;
  std::string tag;
  std::vector<CellId> args;
  // Failure: the encapsulation level the failure originates from
  int fail_level = 0;
  // Split: both residual states of an outer non-deterministic choice
  rt::ChoiceId id;
  CellId left = 0, right = 0;
};

struct OracleResult {
  ValueMultiset values;
  bool truncated = false;
};

struct SetOracleResult {
  std::vector<ValueMultiset> sets;  // one per outer resolution, DFS order
  bool truncated = false;
};

// Reference interpreter: a lazily reduced heap of shared cells. Argument
// passing allocates one cell per syntactic argument, so duplicated variables
// share a cell and choices resolve once per derivation (call-time choice).
// Enumeration backtracks over choice cells with a trail; every overwrite is
// undone when a branch is abandoned, so memoized reductions stay consistent
// with the decisions of the current derivation.
class Evaluator {
 public:
  struct Config {
    int depth_bound = 16;           // resolved choices per derivation
    long long step_budget = 8'000'000;  // reduction steps per public call
  };

  // Installed in synthesizer-backed runs: produces the collected search tree
  // of a set-function application; the evaluator streams it back into cells.
  using SetFunHandler =
      std::function<rt::Tree(Evaluator&, const FuncDef& target, const std::vector<CellId>& args)>;

  explicit Evaluator(const Program& program) : Evaluator(program, Config{}) {}
  Evaluator(const Program& program, Config config);
  ~Evaluator();

  Evaluator(const Evaluator&) = delete;
  Evaluator& operator=(const Evaluator&) = delete;

  const Program& program() const { return program_; }

  void set_synth_handler(SetFunHandler handler) { synth_handler_ = std::move(handler); }

  // Allocation. Entry cells live at level 0.
  CellId alloc_entry_cell(const ExprPtr& e);
  CellId alloc_value_cell(const Value& v, int level = 0);
  CellId alloc_set_fun_app(const FuncDef& target, const std::vector<ExprPtr>& args);

  // Forces a cell to head normal form without making decisions: an
  // unresolved choice is reported as a Split with both residual cells.
  // Pending computations blocked on a choice are pull-tabbed so the split
  // reaches the root with a stable identifier.
  EvalOutcome force_hnf(CellId cell);

  // Enumerates all values of a cell at the top level (bounded DFS over
  // choice decisions, Left before Right).
  OracleResult enumerate(CellId root);

  // Reads the current state of a cell back as a partial value; unevaluated
  // positions become Bottom. Never forces anything.
  Value read_back_partial(CellId cell) const;

  bool truncated() const { return truncated_; }

 private:
  friend struct LayerRun;
  struct Cell;
  struct StateExpr;
  struct StatePendIf;
  struct StatePendPrim;
  struct StatePendFun;
  struct StatePendSetFun;
  struct StateHeadInt;
  struct StateHeadCon;
  struct StateChoice;
  struct StateFailed;
  struct StateAlias;
  struct StateSynth;

  enum class Style { Decide, Reify };

  struct ForceOut {
    enum class Kind { Value, Fail, Choice };
    Kind kind;
    CellId cell = 0;  // Value: final cell; Choice: the blocking choice cell
    int fail_level = 0;
  };

  struct LayerResult {
    std::vector<Value> values;
    std::vector<int> fail_levels;
    bool blocked = false;
    CellId blocked_cell = 0;
  };

  using Env = std::map<std::string, CellId>;
  using EnvPtr = std::shared_ptr<const Env>;

  CellId alloc_expr(ExprPtr e, EnvPtr env, int level);
  CellId build_value_cell(const Value& v, int level);
  CellId materialize_list(const std::vector<Value>& vs, int level);

  ForceOut force(CellId c, Style style);
  struct NfOut {
    enum class Kind { Done, Fail, Choice };
    Kind kind;
    CellId cell = 0;
    int fail_level = 0;
  };
  NfOut normalize_full(CellId c, Style style);

  LayerResult run_layer(CellId root, int level);

  struct SetFunOut {
    enum class Kind { Value, Fail, Blocked };
    Kind kind;
    CellId cell = 0;
    int fail_level = 0;
  };
  SetFunOut eval_set_fun(const FuncDef& target, const std::vector<CellId>& args,
                         int caller_level);

  CellId resolve(CellId c) const;
  void set_state(CellId c, Cell&& replacement);
  size_t trail_mark() const;
  void undo_to(size_t mark);
  void count_step();

  const Program& program_;
  Config config_;
  std::deque<Cell> cells_;
  std::vector<std::pair<CellId, Cell>> trail_;
  std::uint64_t next_outer_id_ = 0;
  long long steps_left_ = 0;
  int depth_left_ = 0;
  bool truncated_ = false;
  SetFunHandler synth_handler_;
};

// Convenience wrappers.
OracleResult enumerate_values(const Program& p, const ExprPtr& e, int depth_bound);
SetOracleResult set_function_oracle(const Program& p, const std::string& function_name,
                                    const std::vector<ExprPtr>& args, int depth_bound);

// Converts a list value produced by a set-function application into the
// multiset it denotes.
ValueMultiset multiset_from_list_value(const Value& v);

}  // namespace setsynth::oracle
