#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "setsynth/runtime.hpp"

using namespace setsynth;
using namespace setsynth::rt;

namespace {

Tree leaf(std::int64_t v) { return Tree::value(Hnf::integer(v)); }

ChoiceId sid(const std::string& p) { return ChoiceId::supply(p); }

Tree cons(Tree x, Tree xs) { return Tree::value(Hnf::con(":", {std::move(x), std::move(xs)})); }
Tree nil() { return Tree::value(Hnf::con("[]", {})); }

SuspensionPtr susp_head(Hnf h) {
  return make_suspension([h] {
    SuspResult r;
    r.kind = SuspResult::Kind::Head;
    r.head = h;
    return r;
  });
}

SuspensionPtr susp_fail(int level = 0) {
  return make_suspension([level] {
    SuspResult r;
    r.kind = SuspResult::Kind::Fail;
    r.fail_level = level;
    return r;
  });
}

SuspensionPtr susp_split(ChoiceId id, SuspensionPtr l, SuspensionPtr r) {
  return make_suspension([id, l, r] {
    SuspResult res;
    res.kind = SuspResult::Kind::Split;
    res.id = id;
    res.left = l;
    res.right = r;
    return res;
  });
}

ValueMultiset ints(std::initializer_list<std::int64_t> xs) {
  ValueMultiset out;
  for (auto x : xs) out.push_back(Value::integer(x));
  return out;
}

}  // namespace

TEST_CASE("identifier supplies are disjoint") {
  IdSupply s = init_supply();
  CHECK(unique_id(left_supply(s)) != unique_id(right_supply(s)));
  CHECK(unique_id(s) != unique_id(left_supply(s)));

  // ids drawn from distinct supply paths are pairwise distinct
  std::set<ChoiceId> seen;
  size_t count = 0;
  // every node of a binary tree of depth 13 plus a deeper chain
  std::function<void(IdSupply, int)> walk = [&](IdSupply sup, int depth) {
    seen.insert(unique_id(sup));
    ++count;
    if (depth == 0) return;
    walk(left_supply(sup), depth - 1);
    walk(right_supply(sup), depth - 1);
  };
  walk(s, 13);
  CHECK(count >= 10000);
  CHECK(seen.size() == count);
}

TEST_CASE("apply_st preserves failure") {
  Tree r = apply_st([](const Hnf&) { return leaf(99); }, Tree::fail(1));
  const Node& n = r.force();
  CHECK(n.kind == Node::Kind::Fail);
  CHECK(n.level == 1);
}

TEST_CASE("apply_st pull-tabs the head of one23") {
  // list (1?2) : ([] ? [3]) as a search tree
  Tree one23 = Tree::value(Hnf::con(
      ":", {Tree::choice(sid("0"), 1, leaf(1), leaf(2)),
            Tree::choice(sid("1"), 1, nil(), cons(leaf(3), nil()))}));
  auto head = [](const Hnf& h) -> Tree {
    if (h.tag == "[]") return Tree::fail(1);
    return h.args[0];
  };
  Tree r = apply_st(head, one23);
  const Node& n = r.force();
  REQUIRE(n.kind == Node::Kind::Choice);
  CHECK(n.left().force().value.num == 1);
  CHECK(n.right().force().value.num == 2);
}

TEST_CASE("apply_st reifies outer failure as Fail 0") {
  Tree t = Tree::unevaluated(susp_fail());
  Tree r = apply_st([](const Hnf&) { return leaf(1); }, t);
  const Node& n = r.force();
  CHECK(n.kind == Node::Kind::Fail);
  CHECK(n.level == 0);
}

TEST_CASE("apply_st reifies outer split as a level-0 choice with the split id") {
  ChoiceId id = ChoiceId::outer(7);
  Tree t = Tree::unevaluated(
      susp_split(id, susp_head(Hnf::integer(1)), susp_head(Hnf::integer(2))));
  Tree r = apply_st([](const Hnf& h) { return Tree::value(Hnf::integer(h.num * 10)); }, t);
  const Node& n = r.force();
  REQUIRE(n.kind == Node::Kind::Choice);
  CHECK(n.id == id);
  CHECK(n.level == 0);
  CHECK(search_dfs({}, r) == ints({10, 20}));
}

TEST_CASE("nf_st on integers and failures") {
  NfFn nf = make_generic_nf();
  CHECK(nf_st(leaf(5), nf).force().value.num == 5);
  CHECK(nf_st(Tree::fail(2), nf).force().level == 2);
}

TEST_CASE("nf_st hoists the inner choice of nd01") {
  NfFn nf = make_generic_nf();
  // Val (Cons (Choice (Val 0) (Val 1)) (Val Nil))
  Tree nd01 = cons(Tree::choice(sid("1"), 1, leaf(0), leaf(1)), nil());
  Tree r = nf_st(nd01, nf);
  const Node& n = r.force();
  REQUIRE(n.kind == Node::Kind::Choice);
  CHECK(n.id == sid("1"));
  CHECK(value_from_tree(n.left()) == Value::constructor(":", {Value::integer(0), Value::constructor("[]")}));
  // st_values(nd01) represents the set {[0], [1]}
  ValueMultiset vs = st_values(nd01, nf);
  REQUIRE(vs.size() == 2);
  CHECK(print_value(vs[0]) == "[0]");
  CHECK(print_value(vs[1]) == "[1]");
}

TEST_CASE("nf_st aborts on child failure") {
  NfFn nf = make_generic_nf();
  Tree t = cons(Tree::fail(1), leaf(0));
  Tree r = nf_st(t, nf);
  const Node& n = r.force();
  CHECK(n.kind == Node::Kind::Fail);
  CHECK(n.level == 1);
}

TEST_CASE("search_dfs basics") {
  Tree t = Tree::choice(sid("0"), 1, leaf(1),
                        Tree::choice(sid("1"), 1, Tree::fail(1), leaf(2)));
  CHECK(search_dfs({}, t) == ints({1, 2}));

  Tree c = Tree::choice(sid("0"), 1, leaf(1), leaf(2));
  DecisionMap right{{sid("0"), Decision::Right}};
  CHECK(search_dfs(right, c) == ints({2}));
}

TEST_CASE("search_dfs makes one decision per identifier") {
  // the shape doubleP produces for double (0?1): Choice i (Choice i 0 1) (Choice i 1 2)
  ChoiceId i = sid("0");
  Tree t = Tree::choice(i, 1, Tree::choice(i, 1, leaf(0), leaf(1)),
                        Tree::choice(i, 1, leaf(1), leaf(2)));
  CHECK(search_dfs({}, t) == ints({0, 2}));
}

TEST_CASE("search_bfs basics") {
  CHECK(search_bfs({}, leaf(7)) == ints({7}));
  ValueMultiset vs = search_bfs({}, Tree::choice(sid("0"), 1, leaf(1), leaf(2)));
  CHECK(as_set(vs) == ints({1, 2}));
}

TEST_CASE("search_bfs finds a shallow value beside an infinite left spine") {
  // infinite chain of choices on the left, value at depth 1 on the right
  struct Spine {
    static Tree grow(int n) {
      return Tree::choice(sid(std::string(static_cast<size_t>(n), '0')), 1,
                          Tree::lazy([n] { return grow(n + 1); }), Tree::fail(1));
    }
  };
  Tree t = Tree::choice(sid("1"), 1, Spine::grow(2), leaf(42));
  SearchStream stream({}, t, Strategy::Bfs);
  auto leaf0 = stream.next();
  REQUIRE(leaf0.has_value());
  CHECK(leaf0->value.num == 42);
}

TEST_CASE("st_values") {
  NfFn nf = make_generic_nf();
  // anyOf over [0,2,3] with the outer choice already resolved to the left
  Tree t = Tree::choice(sid("0"), 1, leaf(0),
                        Tree::choice(sid("1"), 1, leaf(2),
                                     Tree::choice(sid("2"), 1, leaf(3), Tree::fail(1))));
  CHECK(st_values(t, nf) == ints({0, 2, 3}));
  CHECK(st_values(Tree::fail(1), nf).empty());
}

TEST_CASE("st_values_p on failures") {
  NfFn nf = make_generic_nf();
  // level-1 choice over an outer failure and an own failure gives the empty set
  Tree t = Tree::choice(sid("0"), 1, Tree::fail(0), Tree::fail(1));
  Tree r = st_values_p(1, t, nf);
  CHECK(value_from_tree(r) == Value::constructor("[]"));

  Tree fr = st_values_p(1, Tree::fail(0), nf);
  const Node& f = fr.force();
  CHECK(f.kind == Node::Kind::Fail);
  CHECK(f.level == 0);

  CHECK(value_from_tree(st_values_p(2, Tree::fail(2), nf)) == Value::constructor("[]"));
}

TEST_CASE("st_values_p collects level choices and keeps lower ones") {
  NfFn nf = make_generic_nf();
  Tree t = Tree::choice(sid("0"), 1,
                        Tree::choice(ChoiceId::outer(1), 0, leaf(2), leaf(4)),
                        leaf(1));
  Tree r = st_values_p(1, t, nf);
  const Node& n = r.force();
  REQUIRE(n.kind == Node::Kind::Choice);
  CHECK(n.level == 0);
  CHECK(value_from_tree(n.left()) ==
        Value::constructor(":", {Value::integer(2),
                                 Value::constructor(":", {Value::integer(1),
                                                          Value::constructor("[]")})}));
  auto worlds = collect_worlds(r);
  REQUIRE(worlds.size() == 2);
  CHECK(worlds[0].values == ints({2, 1}));
  CHECK(worlds[1].values == ints({4, 1}));
}

TEST_CASE("st_values_p never returns a tree containing its own level failure") {
  NfFn nf = make_generic_nf();
  auto contains_fail_at = [](const Tree& t, int level) {
    std::function<bool(const Tree&)> rec = [&](const Tree& u) -> bool {
      const Node& n = u.force();
      switch (n.kind) {
        case Node::Kind::Fail:
          return n.level == level;
        case Node::Kind::Choice:
          return rec(n.left()) || rec(n.right());
        case Node::Kind::Val:
          if (n.value.is_int) return false;
          for (const Tree& a : n.value.args) {
            if (rec(a)) return true;
          }
          return false;
        case Node::Kind::Uneval:
          return false;
      }
      return false;
    };
    return rec(t);
  };
  Tree trees[] = {
      Tree::fail(1),
      Tree::choice(sid("0"), 1, Tree::fail(1), Tree::fail(0)),
      Tree::choice(sid("0"), 1, leaf(1), Tree::choice(sid("1"), 1, Tree::fail(1), leaf(2))),
      Tree::choice(ChoiceId::outer(3), 0, Tree::fail(1), leaf(5)),
  };
  for (const Tree& t : trees) {
    CHECK_FALSE(contains_fail_at(st_values_p(1, t, nf), 1));
  }
}

TEST_CASE("suspension forcing is memoized") {
  int forced = 0;
  SuspensionPtr s = make_suspension([&forced] {
    ++forced;
    SuspResult r;
    r.kind = SuspResult::Kind::Head;
    r.head = Hnf::integer(9);
    return r;
  });
  Tree t = Tree::unevaluated(s);
  NfFn nf = make_generic_nf();
  CHECK(st_values(t, nf) == ints({9}));
  CHECK(st_values(t, nf) == ints({9}));
  CHECK(forced == 1);
}

TEST_CASE("tree dump shows ids and levels") {
  Tree t = Tree::choice(sid("01"), 1, leaf(1), Tree::fail(0));
  CHECK(dump_tree(t) == "Choice s:01 @1\n  Val 1\n  Fail 0\n");
}
