#pragma once

#include <cstdint>
#include <compare>
#include <string>
#include <vector>

namespace setsynth {

// A ground constructor term. `Bottom` marks an undefined/unevaluated
// position; it only appears when reading back partially evaluated data from
// the reference interpreter, never in the multisets produced by search.
struct Value {
  enum class Kind { Int, Con, Bottom };

  Kind kind = Kind::Bottom;
  std::int64_t num = 0;
  std::string con;
  std::vector<Value> args;

  static Value integer(std::int64_t n) {
    Value v;
    v.kind = Kind::Int;
    v.num = n;
    return v;
  }
  static Value constructor(std::string tag, std::vector<Value> as = {}) {
    Value v;
    v.kind = Kind::Con;
    v.con = std::move(tag);
    v.args = std::move(as);
    return v;
  }
  static Value bottom() { return Value{}; }

  bool is_int() const { return kind == Kind::Int; }
  bool is_con() const { return kind == Kind::Con; }
  bool is_bottom() const { return kind == Kind::Bottom; }

  bool operator==(const Value& o) const;
  std::strong_ordering operator<=>(const Value& o) const;
};

using ValueMultiset = std::vector<Value>;

// Renders a value in source syntax: list spines as [a,b,c], nullary
// constructors bare, applied constructors parenthesized in argument position.
std::string print_value(const Value& v);
std::string print_multiset(const ValueMultiset& vs);

// Sorted, deduplicated copy; the set view of a multiset.
ValueMultiset as_set(ValueMultiset vs);

}  // namespace setsynth
