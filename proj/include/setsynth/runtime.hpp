#pragma once

#include <deque>
#include <functional>
#include <optional>

#include "setsynth/tree.hpp"
#include "setsynth/value.hpp"

namespace setsynth::rt {

// Per-type normal-form operation: takes a head-normal form, fully evaluates
// it, hoisting choices and failures out of argument positions.
using NfFn = std::function<Tree(const Hnf&)>;

// Applies an operation over a search-tree argument. Choices pull-tab to
// choices over both results, failures pass through, suspensions are forced
// first: an outer failure reifies as Fail, an outer split as a Choice at
// `outer_level` carrying the split's identifier.
Tree apply_st(std::function<Tree(const Hnf&)> f, Tree t, int outer_level = 0);

// Evaluates every value in the tree to normal form via `nf`; the result has
// no Uneval nodes and every Val holds a fully evaluated value. Lazy in the
// branches, so infinite trees normalize on demand.
Tree nf_st(Tree t, const NfFn& nf, int outer_level = 0);

// The structure-generic normal-form operation: normalizes constructor
// children left to right, hoisting child choices (ids and levels preserved)
// and aborting on child failures. Integers are already normal.
Tree nf_hnf(const Hnf& h, const NfFn& nf);
NfFn make_generic_nf();

enum class Strategy { Dfs, Bfs };

// Streaming search over an Uneval-free tree. Yields leaves in strategy
// order; each leaf carries the decisions that led to it. Choice nodes with a
// stored decision follow it; undecided choices record Left then Right.
class SearchStream {
 public:
  SearchStream(DecisionMap m, Tree t, Strategy s = Strategy::Dfs);

  struct Leaf {
    bool is_value = false;  // otherwise a failure leaf
    Hnf value;
    int fail_level = 0;
    DecisionMap decisions;
  };

  // next value leaf by default; with include_failures, failure leaves too
  std::optional<Leaf> next(bool include_failures = false);

 private:
  struct Item {
    DecisionMap m;
    Tree t;
  };
  std::deque<Item> work_;
  Strategy strategy_;
};

// Depth-first / breadth-first collection of all values of an Uneval-free
// tree into fully evaluated form. The caller normalizes first (see
// st_values). Failures at any level yield nothing.
ValueMultiset search_dfs(const DecisionMap& m, Tree t);
ValueMultiset search_bfs(const DecisionMap& m, Tree t);

// All values of a tree produced by a level-1 computation: normalize, then
// search with no decisions made.
ValueMultiset st_values(Tree t, const NfFn& nf, Strategy s = Strategy::Dfs);

// Level-aware collection for nested encapsulation: normalizes `t`, then
// gathers the level-e structure into a tree of non-deterministic lists.
// Failures at level e become the empty list; lower-level failures propagate
// unless merged away; lower-level choices remain above the collected lists.
Tree st_values_p(int level, Tree t, const NfFn& nf);

// Converts a fully evaluated tree/head-normal form into a plain value.
Value value_from_tree(const Tree& t);
Value value_from_hnf(const Hnf& h);
// Ground value to tree (no suspensions).
Tree tree_from_value(const Value& v);

// One result of extracting a collected (level-1) tree: either a value
// multiset or a failure of the whole computation in that outer world.
struct World {
  bool failed = false;
  bool truncated = false;
  ValueMultiset values;
};

// Enumerates the outer worlds of a tree produced by st_values_p(1, ...).
// Remaining choices are outer (level 0) and split the result; Fail leaves
// are worlds whose demanded outer computation failed.
std::vector<World> collect_worlds(Tree collected, Strategy s = Strategy::Dfs,
                                  size_t max_worlds = SIZE_MAX,
                                  size_t max_values_per_world = SIZE_MAX);

}  // namespace setsynth::rt
