#include "setsynth/value.hpp"

#include <algorithm>
#include <sstream>

namespace setsynth {
namespace {

bool is_list_spine(const Value& v) {
  const Value* cur = &v;
  while (cur->is_con() && cur->con == ":") {
    if (cur->args.size() != 2) return false;
    cur = &cur->args[1];
  }
  return cur->is_con() && cur->con == "[]";
}

void print_rec(std::ostream& out, const Value& v, bool atom) {
  switch (v.kind) {
    case Value::Kind::Int:
      out << v.num;
      return;
    case Value::Kind::Bottom:
      out << "_|_";
      return;
    case Value::Kind::Con:
      break;
  }
  if (is_list_spine(v)) {
    out << '[';
    const Value* cur = &v;
    bool first = true;
    while (cur->con == ":") {
      if (!first) out << ',';
      first = false;
      print_rec(out, cur->args[0], false);
      cur = &cur->args[1];
    }
    out << ']';
    return;
  }
  if (v.args.empty()) {
    out << v.con;
    return;
  }
  if (atom) out << '(';
  out << v.con;
  for (const Value& a : v.args) {
    out << ' ';
    print_rec(out, a, true);
  }
  if (atom) out << ')';
}

}  // namespace

bool Value::operator==(const Value& o) const {
  return (*this <=> o) == std::strong_ordering::equal;
}

std::strong_ordering Value::operator<=>(const Value& o) const {
  if (auto c = kind <=> o.kind; c != 0) return c;
  switch (kind) {
    case Kind::Int:
      return num <=> o.num;
    case Kind::Bottom:
      return std::strong_ordering::equal;
    case Kind::Con: {
      if (auto c = con <=> o.con; c != 0) return c;
      if (auto c = args.size() <=> o.args.size(); c != 0) return c;
      for (size_t i = 0; i < args.size(); ++i) {
        if (auto c = args[i] <=> o.args[i]; c != 0) return c;
      }
      return std::strong_ordering::equal;
    }
  }
  return std::strong_ordering::equal;
}

std::string print_value(const Value& v) {
  std::ostringstream out;
  print_rec(out, v, false);
  return out.str();
}

std::string print_multiset(const ValueMultiset& vs) {
  std::ostringstream out;
  out << '[';
  for (size_t i = 0; i < vs.size(); ++i) {
    if (i) out << ',';
    print_rec(out, vs[i], false);
  }
  out << ']';
  return out.str();
}

ValueMultiset as_set(ValueMultiset vs) {
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

}  // namespace setsynth
