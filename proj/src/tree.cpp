#include "setsynth/tree.hpp"

#include <sstream>

#include "setsynth/source.hpp"

namespace setsynth::rt {

std::string ChoiceId::to_string() const {
  switch (kind) {
    case Kind::Supply:
      return "s:" + (path.empty() ? std::string("@") : path);
    case Kind::Outer:
      return "o:" + std::to_string(serial);
    case Kind::Local:
      return "l:" + std::to_string(serial);
  }
  return "?";
}

Hnf Hnf::integer(std::int64_t v) {
  Hnf h;
  h.is_int = true;
  h.num = v;
  return h;
}

Hnf Hnf::con(std::string tag, std::vector<Tree> args) {
  Hnf h;
  h.is_int = false;
  h.tag = std::move(tag);
  h.args = std::move(args);
  return h;
}

const SuspResult& Suspension::force() {
  if (!memo_) {
    memo_ = std::make_unique<SuspResult>(compute());
  }
  return *memo_;
}

namespace {
class FnSuspension final : public Suspension {
 public:
  explicit FnSuspension(std::function<SuspResult()> fn) : fn_(std::move(fn)) {}

 protected:
  SuspResult compute() override { return fn_(); }

 private:
  std::function<SuspResult()> fn_;
};
}  // namespace

SuspensionPtr make_suspension(std::function<SuspResult()> fn) {
  return std::make_shared<FnSuspension>(std::move(fn));
}

struct Tree::Cell {
  // Either the forced node or the pending producer. `forcing` catches
  // divergent self-referential thunks.
  std::unique_ptr<Node> node;
  std::function<Tree()> thunk;
  bool forcing = false;
};

Tree::Tree() : cell_(std::make_shared<Cell>()) {
  cell_->node = std::make_unique<Node>();
  cell_->node->kind = Node::Kind::Fail;
  cell_->node->level = 0;
}

Tree Tree::value(Hnf h) {
  Tree t;
  t.cell_->node->kind = Node::Kind::Val;
  t.cell_->node->value = std::move(h);
  return t;
}

Tree Tree::fail(int level) {
  Tree t;
  t.cell_->node->kind = Node::Kind::Fail;
  t.cell_->node->level = level;
  return t;
}

Tree Tree::choice(ChoiceId id, int level, Tree l, Tree r) {
  Tree t;
  Node& n = *t.cell_->node;
  n.kind = Node::Kind::Choice;
  n.id = std::move(id);
  n.level = level;
  n.children = {std::move(l), std::move(r)};
  return t;
}

Tree Tree::unevaluated(SuspensionPtr s) {
  Tree t;
  t.cell_->node->kind = Node::Kind::Uneval;
  t.cell_->node->susp = std::move(s);
  return t;
}

Tree Tree::lazy(std::function<Tree()> producer) {
  Tree t;
  t.cell_->node.reset();
  t.cell_->thunk = std::move(producer);
  return t;
}

const Node& Tree::force() const {
  Cell& c = *cell_;
  if (c.node) return *c.node;
  if (c.forcing) throw EvalError("divergent tree thunk");
  c.forcing = true;
  Tree produced = c.thunk();
  // collapse chains of thunks
  const Node& inner = produced.force();
  c.node = std::make_unique<Node>(inner);
  c.thunk = nullptr;
  c.forcing = false;
  return *c.node;
}

bool tree_equal(const Tree& a, const Tree& b) {
  if (a.same_cell(b)) return true;
  const Node& x = a.force();
  const Node& y = b.force();
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case Node::Kind::Fail:
      return x.level == y.level;
    case Node::Kind::Uneval:
      return x.susp == y.susp;
    case Node::Kind::Choice:
      return x.id == y.id && x.level == y.level && tree_equal(x.left(), y.left()) &&
             tree_equal(x.right(), y.right());
    case Node::Kind::Val: {
      const Hnf& h = x.value;
      const Hnf& g = y.value;
      if (h.is_int != g.is_int) return false;
      if (h.is_int) return h.num == g.num;
      if (h.tag != g.tag || h.args.size() != g.args.size()) return false;
      for (size_t i = 0; i < h.args.size(); ++i) {
        if (!tree_equal(h.args[i], g.args[i])) return false;
      }
      return true;
    }
  }
  return false;
}

namespace {
void dump_rec(std::ostream& out, const Tree& t, int indent) {
  const Node& n = t.force();
  for (int i = 0; i < indent; ++i) out << "  ";
  switch (n.kind) {
    case Node::Kind::Fail:
      out << "Fail " << n.level << '\n';
      return;
    case Node::Kind::Uneval:
      out << "Uneval\n";
      return;
    case Node::Kind::Choice:
      out << "Choice " << n.id.to_string() << " @" << n.level << '\n';
      dump_rec(out, n.left(), indent + 1);
      dump_rec(out, n.right(), indent + 1);
      return;
    case Node::Kind::Val:
      if (n.value.is_int) {
        out << "Val " << n.value.num << '\n';
      } else {
        out << "Val " << n.value.tag << '\n';
        for (const Tree& a : n.value.args) dump_rec(out, a, indent + 1);
      }
      return;
  }
}
}  // namespace

std::string dump_tree(const Tree& t) {
  std::ostringstream out;
  dump_rec(out, t, 0);
  return out.str();
}

}  // namespace setsynth::rt
