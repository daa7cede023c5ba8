#include "setsynth/runtime.hpp"

#include "setsynth/source.hpp"

namespace setsynth::rt {

namespace {

Tree nf_con_from(Hnf h, size_t i, NfFn nf) {
  for (; i < h.args.size(); ++i) {
    Tree norm = nf_st(h.args[i], nf);
    const Node& n = norm.force();
    switch (n.kind) {
      case Node::Kind::Fail:
        return Tree::fail(n.level);
      case Node::Kind::Choice: {
        Hnf left = h;
        Hnf right = std::move(h);
        left.args[i] = n.left();
        right.args[i] = n.right();
        return Tree::choice(
            n.id, n.level,
            Tree::lazy([left = std::move(left), i, nf] { return nf_con_from(left, i, nf); }),
            Tree::lazy([right = std::move(right), i, nf] { return nf_con_from(right, i, nf); }));
      }
      case Node::Kind::Val:
        h.args[i] = Tree::value(n.value);
        break;
      case Node::Kind::Uneval:
        throw EvalError("unevaluated node survived normalization");
    }
  }
  return Tree::value(std::move(h));
}

}  // namespace

Tree apply_st(std::function<Tree(const Hnf&)> f, Tree t, int outer_level) {
  const Node& n = t.force();
  switch (n.kind) {
    case Node::Kind::Val:
      return f(n.value);
    case Node::Kind::Fail:
      return t;
    case Node::Kind::Choice:
      return Tree::choice(
          n.id, n.level,
          Tree::lazy([f, l = n.left(), outer_level] { return apply_st(f, l, outer_level); }),
          Tree::lazy([f, r = n.right(), outer_level] { return apply_st(f, r, outer_level); }));
    case Node::Kind::Uneval: {
      const SuspResult& r = n.susp->force();
      switch (r.kind) {
        case SuspResult::Kind::Head:
          return f(r.head);
        case SuspResult::Kind::Fail:
          return Tree::fail(r.fail_level);
        case SuspResult::Kind::Split:
          return Tree::choice(
              r.id, outer_level,
              Tree::lazy([f, s = r.left, outer_level] {
                return apply_st(f, Tree::unevaluated(s), outer_level);
              }),
              Tree::lazy([f, s = r.right, outer_level] {
                return apply_st(f, Tree::unevaluated(s), outer_level);
              }));
      }
      throw EvalError("unreachable suspension state");
    }
  }
  throw EvalError("unreachable tree state");
}

Tree nf_st(Tree t, const NfFn& nf, int outer_level) {
  const Node& n = t.force();
  switch (n.kind) {
    case Node::Kind::Val:
      return nf(n.value);
    case Node::Kind::Fail:
      return t;
    case Node::Kind::Choice:
      return Tree::choice(
          n.id, n.level,
          Tree::lazy([l = n.left(), nf, outer_level] { return nf_st(l, nf, outer_level); }),
          Tree::lazy([r = n.right(), nf, outer_level] { return nf_st(r, nf, outer_level); }));
    case Node::Kind::Uneval: {
      const SuspResult& r = n.susp->force();
      switch (r.kind) {
        case SuspResult::Kind::Head:
          return nf(r.head);
        case SuspResult::Kind::Fail:
          return Tree::fail(r.fail_level);
        case SuspResult::Kind::Split:
          return Tree::choice(
              r.id, outer_level,
              Tree::lazy([s = r.left, nf, outer_level] {
                return nf_st(Tree::unevaluated(s), nf, outer_level);
              }),
              Tree::lazy([s = r.right, nf, outer_level] {
                return nf_st(Tree::unevaluated(s), nf, outer_level);
              }));
      }
      throw EvalError("unreachable suspension state");
    }
  }
  throw EvalError("unreachable tree state");
}

Tree nf_hnf(const Hnf& h, const NfFn& nf) {
  if (h.is_int) return Tree::value(h);
  return nf_con_from(h, 0, nf);
}

namespace {
struct GenericNf {
  Tree operator()(const Hnf& h) const { return nf_hnf(h, NfFn(*this)); }
};
}  // namespace

NfFn make_generic_nf() { return GenericNf{}; }

SearchStream::SearchStream(DecisionMap m, Tree t, Strategy s) : strategy_(s) {
  work_.push_back(Item{std::move(m), std::move(t)});
}

std::optional<SearchStream::Leaf> SearchStream::next(bool include_failures) {
  while (!work_.empty()) {
    Item item;
    if (strategy_ == Strategy::Dfs) {
      item = std::move(work_.back());
      work_.pop_back();
    } else {
      item = std::move(work_.front());
      work_.pop_front();
    }
    const Node& n = item.t.force();
    switch (n.kind) {
      case Node::Kind::Val: {
        Leaf leaf;
        leaf.is_value = true;
        leaf.value = n.value;
        leaf.decisions = std::move(item.m);
        return leaf;
      }
      case Node::Kind::Fail: {
        if (!include_failures) break;
        Leaf leaf;
        leaf.is_value = false;
        leaf.fail_level = n.level;
        leaf.decisions = std::move(item.m);
        return leaf;
      }
      case Node::Kind::Uneval:
        throw EvalError("search over a tree with unevaluated nodes");
      case Node::Kind::Choice: {
        auto it = item.m.find(n.id);
        if (it != item.m.end()) {
          Tree follow = it->second == Decision::Left ? n.left() : n.right();
          if (strategy_ == Strategy::Dfs) {
            work_.push_back(Item{std::move(item.m), std::move(follow)});
          } else {
            work_.push_front(Item{std::move(item.m), std::move(follow)});
          }
          break;
        }
        DecisionMap ml = item.m;
        DecisionMap mr = std::move(item.m);
        ml.emplace(n.id, Decision::Left);
        mr.emplace(n.id, Decision::Right);
        if (strategy_ == Strategy::Dfs) {
          work_.push_back(Item{std::move(mr), n.right()});
          work_.push_back(Item{std::move(ml), n.left()});
        } else {
          work_.push_back(Item{std::move(ml), n.left()});
          work_.push_back(Item{std::move(mr), n.right()});
        }
        break;
      }
    }
  }
  return std::nullopt;
}

namespace {
ValueMultiset drain(SearchStream stream) {
  ValueMultiset out;
  while (auto leaf = stream.next()) {
    out.push_back(value_from_hnf(leaf->value));
  }
  return out;
}
}  // namespace

ValueMultiset search_dfs(const DecisionMap& m, Tree t) {
  return drain(SearchStream(m, std::move(t), Strategy::Dfs));
}

ValueMultiset search_bfs(const DecisionMap& m, Tree t) {
  return drain(SearchStream(m, std::move(t), Strategy::Bfs));
}

ValueMultiset st_values(Tree t, const NfFn& nf, Strategy s) {
  return drain(SearchStream(DecisionMap{}, nf_st(std::move(t), nf), s));
}

namespace {

Tree nil_tree() { return Tree::value(Hnf::con("[]", {})); }

Tree singleton_list(const Hnf& h) {
  return Tree::value(Hnf::con(":", {Tree::value(h), nil_tree()}));
}

Tree append_collected(int e, Tree a, Tree b);
Tree collect_level(int e, Tree t, DecisionMap m);

Tree append_collected(int e, Tree a, Tree b) {
  const Node& x = a.force();
  switch (x.kind) {
    case Node::Kind::Choice:
      // a lower-level choice splits the whole collection
      return Tree::choice(
          x.id, x.level,
          Tree::lazy([e, l = x.left(), b] { return append_collected(e, l, b); }),
          Tree::lazy([e, r = x.right(), b] { return append_collected(e, r, b); }));
    case Node::Kind::Val: {
      const Hnf& h = x.value;
      if (h.is_int || (h.tag != ":" && h.tag != "[]")) {
        throw EvalError("collected tree is not a list of values");
      }
      if (h.tag == ":") {
        Tree head = h.args[0];
        Tree tail = h.args[1];
        return Tree::value(Hnf::con(
            ":", {head, Tree::lazy([e, tail, b] { return append_collected(e, tail, b); })}));
      }
      // empty collection: merges with failures as a level-e failure would
      const Node& y = b.force();
      switch (y.kind) {
        case Node::Kind::Fail:
          return nil_tree();
        case Node::Kind::Choice:
          return Tree::choice(
              y.id, y.level,
              Tree::lazy([e, a, l = y.left()] { return append_collected(e, a, l); }),
              Tree::lazy([e, a, r = y.right()] { return append_collected(e, a, r); }));
        default:
          return b;
      }
    }
    case Node::Kind::Fail: {
      const Node& y = b.force();
      switch (y.kind) {
        case Node::Kind::Fail: {
          // sibling failures merge to their maximum level
          int level = std::max(x.level, y.level);
          return level == e ? nil_tree() : Tree::fail(level);
        }
        case Node::Kind::Choice:
          return Tree::choice(
              y.id, y.level,
              Tree::lazy([e, a, l = y.left()] { return append_collected(e, a, l); }),
              Tree::lazy([e, a, r = y.right()] { return append_collected(e, a, r); }));
        case Node::Kind::Val: {
          const Hnf& h = y.value;
          if (h.is_int || (h.tag != ":" && h.tag != "[]")) {
            throw EvalError("collected tree is not a list of values");
          }
          if (h.tag == ":") return b;  // values beat an outside failure
          return nil_tree();  // empty collection absorbs it like a level-e failure
        }
        case Node::Kind::Uneval:
          throw EvalError("unevaluated node in collected tree");
      }
      throw EvalError("unreachable");
    }
    case Node::Kind::Uneval:
      throw EvalError("unevaluated node in collected tree");
  }
  throw EvalError("unreachable");
}

Tree collect_level(int e, Tree t, DecisionMap m) {
  const Node& n = t.force();
  switch (n.kind) {
    case Node::Kind::Val:
      return singleton_list(n.value);
    case Node::Kind::Fail:
      return n.level == e ? nil_tree() : Tree::fail(n.level);
    case Node::Kind::Uneval:
      throw EvalError("unevaluated node reached value collection");
    case Node::Kind::Choice: {
      if (n.level == e) {
        auto it = m.find(n.id);
        if (it != m.end()) {
          Tree follow = it->second == Decision::Left ? n.left() : n.right();
          return collect_level(e, follow, std::move(m));
        }
        DecisionMap ml = m;
        DecisionMap mr = std::move(m);
        ml.emplace(n.id, Decision::Left);
        mr.emplace(n.id, Decision::Right);
        Tree l = Tree::lazy([e, lt = n.left(), ml = std::move(ml)] {
          return collect_level(e, lt, ml);
        });
        Tree r = Tree::lazy([e, rt = n.right(), mr = std::move(mr)] {
          return collect_level(e, rt, mr);
        });
        return append_collected(e, l, r);
      }
      if (n.level > e) {
        throw EvalError("choice above the current encapsulation level");
      }
      DecisionMap m2 = m;
      return Tree::choice(
          n.id, n.level,
          Tree::lazy([e, l = n.left(), m] { return collect_level(e, l, m); }),
          Tree::lazy([e, r = n.right(), m2] { return collect_level(e, r, m2); }));
    }
  }
  throw EvalError("unreachable");
}

}  // namespace

Tree st_values_p(int level, Tree t, const NfFn& nf) {
  return collect_level(level, nf_st(std::move(t), nf), DecisionMap{});
}

Value value_from_hnf(const Hnf& h) {
  if (h.is_int) return Value::integer(h.num);
  std::vector<Value> args;
  args.reserve(h.args.size());
  for (const Tree& a : h.args) args.push_back(value_from_tree(a));
  return Value::constructor(h.tag, std::move(args));
}

Value value_from_tree(const Tree& t) {
  const Node& n = t.force();
  if (n.kind != Node::Kind::Val) {
    throw EvalError("tree is not a fully evaluated value");
  }
  return value_from_hnf(n.value);
}

Tree tree_from_value(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Int:
      return Tree::value(Hnf::integer(v.num));
    case Value::Kind::Con: {
      std::vector<Tree> args;
      args.reserve(v.args.size());
      for (const Value& a : v.args) args.push_back(tree_from_value(a));
      return Tree::value(Hnf::con(v.con, std::move(args)));
    }
    case Value::Kind::Bottom:
      throw EvalError("cannot build a tree from an undefined value");
  }
  throw EvalError("unreachable");
}

std::vector<World> collect_worlds(Tree collected, Strategy s, size_t max_worlds,
                                  size_t max_values_per_world) {
  struct Item {
    DecisionMap m;
    Tree t;
    ValueMultiset prefix;
  };
  std::deque<Item> work;
  work.push_back(Item{{}, std::move(collected), {}});
  std::vector<World> worlds;

  while (!work.empty() && worlds.size() < max_worlds) {
    Item item;
    if (s == Strategy::Dfs) {
      item = std::move(work.back());
      work.pop_back();
    } else {
      item = std::move(work.front());
      work.pop_front();
    }
    // walk the list spine in place until a leaf or an undecided split
    bool emitted = false;
    while (!emitted) {
      const Node& n = item.t.force();
      if (n.kind == Node::Kind::Fail) {
        worlds.push_back(World{true, false, {}});
        emitted = true;
      } else if (n.kind == Node::Kind::Val) {
        const Hnf& h = n.value;
        if (h.is_int || (h.tag != ":" && h.tag != "[]")) {
          throw EvalError("collected tree is not a list of values");
        }
        if (h.tag == "[]") {
          worlds.push_back(World{false, false, std::move(item.prefix)});
          emitted = true;
        } else if (item.prefix.size() >= max_values_per_world) {
          worlds.push_back(World{false, true, std::move(item.prefix)});
          emitted = true;
        } else {
          item.prefix.push_back(value_from_tree(h.args[0]));
          item.t = h.args[1];
        }
      } else if (n.kind == Node::Kind::Choice) {
        auto it = item.m.find(n.id);
        if (it != item.m.end()) {
          item.t = it->second == Decision::Left ? n.left() : n.right();
          continue;
        }
        DecisionMap ml = item.m;
        DecisionMap mr = std::move(item.m);
        ml.emplace(n.id, Decision::Left);
        mr.emplace(n.id, Decision::Right);
        if (s == Strategy::Dfs) {
          work.push_back(Item{std::move(mr), n.right(), item.prefix});
          work.push_back(Item{std::move(ml), n.left(), std::move(item.prefix)});
        } else {
          work.push_back(Item{std::move(ml), n.left(), item.prefix});
          work.push_back(Item{std::move(mr), n.right(), std::move(item.prefix)});
        }
        break;
      } else {
        throw EvalError("unevaluated node in collected tree");
      }
    }
  }
  return worlds;
}

}  // namespace setsynth::rt
