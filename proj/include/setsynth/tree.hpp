#pragma once

#include <cstdint>
#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace setsynth::rt {

// Identifies one syntactic choice. Supply-derived identifiers are bit paths
// into the identifier tree; Outer identifiers are minted by the host
// evaluator when argument evaluation splits; Local identifiers come from the
// counter used when synthesis runs without supply threading.
struct ChoiceId {
  enum class Kind : uint8_t { Supply, Outer, Local };
  Kind kind = Kind::Outer;
  std::string path;      // Supply
  std::uint64_t serial = 0;  // Outer / Local

  static ChoiceId supply(std::string p) { return {Kind::Supply, std::move(p), 0}; }
  static ChoiceId outer(std::uint64_t n) { return {Kind::Outer, {}, n}; }
  static ChoiceId local(std::uint64_t n) { return {Kind::Local, {}, n}; }

  friend std::strong_ordering operator<=>(const ChoiceId&, const ChoiceId&) = default;
  std::string to_string() const;
};

// An infinite identifier source realized as a path into a binary tree:
// unique_id names the current node, left/right move to disjoint subtrees.
struct IdSupply {
  std::string path;
};

inline IdSupply init_supply() { return {}; }
inline ChoiceId unique_id(const IdSupply& s) { return ChoiceId::supply(s.path); }
inline IdSupply left_supply(const IdSupply& s) { return {s.path + '0'}; }
inline IdSupply right_supply(const IdSupply& s) { return {s.path + '1'}; }

enum class Decision : uint8_t { Left, Right };
using DecisionMap = std::map<ChoiceId, Decision>;

class Tree;

// Constructor-rooted value whose arguments are arbitrary trees, or a plain
// integer.
struct Hnf {
  bool is_int = true;
  std::int64_t num = 0;
  std::string tag;
  std::vector<Tree> args;

  static Hnf integer(std::int64_t v);
  static Hnf con(std::string tag, std::vector<Tree> args);
};

class Suspension;
using SuspensionPtr = std::shared_ptr<Suspension>;

// Outcome of forcing an outer (host-level) computation to head-normal form.
struct SuspResult {
  enum class Kind { Head, Fail, Split };
  Kind kind;
  Hnf head;             // Kind::Head
  int fail_level = 0;   // Kind::Fail
  ChoiceId id;          // Kind::Split
  SuspensionPtr left, right;
};

// An unevaluated host computation. Forcing is memoized: a shared suspension
// is evaluated at most once, which implements call-time choice for shared
// outer arguments.
class Suspension {
 public:
  virtual ~Suspension() = default;
  const SuspResult& force();

 protected:
  virtual SuspResult compute() = 0;

 private:
  std::unique_ptr<SuspResult> memo_;
};

SuspensionPtr make_suspension(std::function<SuspResult()> fn);

struct Node;

// A search-tree handle. Nodes are produced on demand and memoized, so trees
// may be infinite; handles share structure freely.
class Tree {
 public:
  Tree();  // Fail 0; default-constructibility keeps containers simple

  static Tree value(Hnf h);
  static Tree fail(int level);
  static Tree choice(ChoiceId id, int level, Tree l, Tree r);
  static Tree unevaluated(SuspensionPtr s);
  static Tree lazy(std::function<Tree()> producer);

  // Forces only this handle's own thunk chain, never suspensions.
  const Node& force() const;

  bool same_cell(const Tree& o) const { return cell_ == o.cell_; }

 private:
  struct Cell;
  std::shared_ptr<Cell> cell_;
};

struct Node {
  enum class Kind { Val, Uneval, Fail, Choice };
  Kind kind = Kind::Fail;
  Hnf value;            // Val
  SuspensionPtr susp;   // Uneval
  int level = 0;        // Fail / Choice
  ChoiceId id;          // Choice
  std::vector<Tree> children;  // Choice: [left, right]

  const Tree& left() const { return children[0]; }
  const Tree& right() const { return children[1]; }
};

// Deep structural equality (finite trees only). Uneval nodes compare by
// suspension identity.
bool tree_equal(const Tree& a, const Tree& b);

// Indented textual form with ids and levels, for tests and debugging.
// Forces the spine of the tree; suspensions are shown unevaluated.
std::string dump_tree(const Tree& t);

}  // namespace setsynth::rt
