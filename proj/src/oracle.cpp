#include "setsynth/oracle.hpp"

#include <algorithm>
#include <cassert>

#include "setsynth/source.hpp"

namespace setsynth::oracle {

namespace {
struct TruncatedError {};
}  // namespace

struct Evaluator::StateExpr {
  ExprPtr e;
  EnvPtr env;
};
struct Evaluator::StatePendIf {
  CellId cond;
  ExprPtr then_e, else_e;
  EnvPtr env;
};
struct Evaluator::StatePendPrim {
  bool is_add;
  CellId a, b;
};
struct Evaluator::StatePendFun {
  const FuncDef* f;
  std::vector<CellId> args;
};
struct Evaluator::StatePendSetFun {
  const FuncDef* target;
  std::vector<CellId> args;
};
struct Evaluator::StateHeadInt {
  std::int64_t v;
};
struct Evaluator::StateHeadCon {
  std::string tag;
  std::vector<CellId> args;
};
struct Evaluator::StateChoice {
  rt::ChoiceId id;
  CellId left, right;
};
struct Evaluator::StateFailed {
  int level;
};
struct Evaluator::StateAlias {
  CellId to;
};
struct Evaluator::StateSynth {
  rt::Tree t;
};

struct Evaluator::Cell {
  int level = 0;
  std::variant<StateExpr, StatePendIf, StatePendPrim, StatePendFun, StatePendSetFun,
               StateHeadInt, StateHeadCon, StateChoice, StateFailed, StateAlias, StateSynth>
      st;
};

Evaluator::Evaluator(const Program& program, Config config)
    : program_(program), config_(config) {
  steps_left_ = config_.step_budget;
  depth_left_ = config_.depth_bound;
}

Evaluator::~Evaluator() = default;

CellId Evaluator::resolve(CellId c) const {
  while (const auto* a = std::get_if<StateAlias>(&cells_[c].st)) c = a->to;
  return c;
}

void Evaluator::set_state(CellId c, Cell&& replacement) {
  trail_.emplace_back(c, std::move(cells_[c]));
  cells_[c] = std::move(replacement);
}

size_t Evaluator::trail_mark() const { return trail_.size(); }

void Evaluator::undo_to(size_t mark) {
  while (trail_.size() > mark) {
    auto& [c, old] = trail_.back();
    cells_[c] = std::move(old);
    trail_.pop_back();
  }
}

void Evaluator::count_step() {
  if (--steps_left_ <= 0) throw TruncatedError{};
}

CellId Evaluator::alloc_expr(ExprPtr e, EnvPtr env, int level) {
  cells_.push_back(Cell{level, StateExpr{std::move(e), std::move(env)}});
  return static_cast<CellId>(cells_.size() - 1);
}

CellId Evaluator::alloc_entry_cell(const ExprPtr& e) {
  return alloc_expr(e, std::make_shared<Env>(), 0);
}

CellId Evaluator::alloc_value_cell(const Value& v, int level) {
  return build_value_cell(v, level);
}

CellId Evaluator::alloc_set_fun_app(const FuncDef& target, const std::vector<ExprPtr>& args) {
  std::vector<CellId> arg_cells;
  arg_cells.reserve(args.size());
  for (const ExprPtr& a : args) arg_cells.push_back(alloc_entry_cell(a));
  cells_.push_back(Cell{0, StatePendSetFun{&target, std::move(arg_cells)}});
  return static_cast<CellId>(cells_.size() - 1);
}

CellId Evaluator::build_value_cell(const Value& v, int level) {
  switch (v.kind) {
    case Value::Kind::Int:
      cells_.push_back(Cell{level, StateHeadInt{v.num}});
      break;
    case Value::Kind::Con: {
      std::vector<CellId> args;
      args.reserve(v.args.size());
      for (const Value& a : v.args) args.push_back(build_value_cell(a, level));
      cells_.push_back(Cell{level, StateHeadCon{v.con, std::move(args)}});
      break;
    }
    case Value::Kind::Bottom:
      throw EvalError("cannot materialize an undefined value");
  }
  return static_cast<CellId>(cells_.size() - 1);
}

CellId Evaluator::materialize_list(const std::vector<Value>& vs, int level) {
  cells_.push_back(Cell{level, StateHeadCon{"[]", {}}});
  CellId tail = static_cast<CellId>(cells_.size() - 1);
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) {
    CellId head = build_value_cell(*it, level);
    cells_.push_back(Cell{level, StateHeadCon{":", {head, tail}}});
    tail = static_cast<CellId>(cells_.size() - 1);
  }
  return tail;
}

namespace {
enum class Step { Proceed, Restart, Return };
}

Evaluator::ForceOut Evaluator::force(CellId c0, Style style) {
  CellId cur = resolve(c0);

  // Forces a child a pending computation needs. Failures overwrite the
  // pending cell; a blocking choice either escapes (Decide) or pull-tabs the
  // pending cell into a choice of two residual computations with the same
  // identifier (Reify).
  auto force_child = [&](CellId child, auto&& rebuild, CellId* value_cell,
                         ForceOut* ret) -> Step {
    ForceOut f = force(child, style);
    switch (f.kind) {
      case ForceOut::Kind::Value:
        *value_cell = f.cell;
        return Step::Proceed;
      case ForceOut::Kind::Fail:
        set_state(cur, Cell{cells_[cur].level, StateFailed{f.fail_level}});
        return Step::Restart;
      case ForceOut::Kind::Choice: {
        if (style == Style::Decide) {
          *ret = f;
          return Step::Return;
        }
        const StateChoice ch = std::get<StateChoice>(cells_[f.cell].st);
        const int lvl = cells_[cur].level;
        cells_.push_back(Cell{lvl, rebuild(ch.left)});
        CellId lcopy = static_cast<CellId>(cells_.size() - 1);
        cells_.push_back(Cell{lvl, rebuild(ch.right)});
        CellId rcopy = static_cast<CellId>(cells_.size() - 1);
        set_state(cur, Cell{lvl, StateChoice{ch.id, lcopy, rcopy}});
        return Step::Restart;
      }
    }
    throw EvalError("unreachable");
  };

  while (true) {
    count_step();
    const int level = cells_[cur].level;

    if (std::holds_alternative<StateHeadInt>(cells_[cur].st) ||
        std::holds_alternative<StateHeadCon>(cells_[cur].st)) {
      return ForceOut{ForceOut::Kind::Value, cur, 0};
    }
    if (const auto* fl = std::get_if<StateFailed>(&cells_[cur].st)) {
      return ForceOut{ForceOut::Kind::Fail, cur, fl->level};
    }
    if (std::holds_alternative<StateChoice>(cells_[cur].st)) {
      return ForceOut{ForceOut::Kind::Choice, cur, 0};
    }
    if (std::holds_alternative<StateAlias>(cells_[cur].st)) {
      cur = resolve(cur);
      continue;
    }

    if (const auto* sy = std::get_if<StateSynth>(&cells_[cur].st)) {
      rt::Tree t = sy->t;
      const rt::Node& n = t.force();
      switch (n.kind) {
        case rt::Node::Kind::Val:
          if (n.value.is_int) {
            set_state(cur, Cell{level, StateHeadInt{n.value.num}});
          } else {
            std::vector<CellId> args;
            args.reserve(n.value.args.size());
            for (const rt::Tree& a : n.value.args) {
              cells_.push_back(Cell{level, StateSynth{a}});
              args.push_back(static_cast<CellId>(cells_.size() - 1));
            }
            set_state(cur, Cell{level, StateHeadCon{n.value.tag, std::move(args)}});
          }
          continue;
        case rt::Node::Kind::Fail:
          set_state(cur, Cell{level, StateFailed{n.level}});
          continue;
        case rt::Node::Kind::Choice: {
          cells_.push_back(Cell{level, StateSynth{n.left()}});
          CellId l = static_cast<CellId>(cells_.size() - 1);
          cells_.push_back(Cell{level, StateSynth{n.right()}});
          CellId r = static_cast<CellId>(cells_.size() - 1);
          set_state(cur, Cell{level, StateChoice{n.id, l, r}});
          continue;
        }
        case rt::Node::Kind::Uneval:
          throw EvalError("collected tree contains an unevaluated node");
      }
      continue;
    }

    if (const auto* ex = std::get_if<StateExpr>(&cells_[cur].st)) {
      const ExprPtr e = ex->e;
      const EnvPtr env = ex->env;
      switch (e->kind) {
        case ExprKind::Var: {
          auto it = env->find(e->name);
          if (it == env->end()) throw EvalError("unbound variable '" + e->name + "'");
          set_state(cur, Cell{level, StateAlias{it->second}});
          cur = resolve(it->second);
          continue;
        }
        case ExprKind::Lit:
          set_state(cur, Cell{level, StateHeadInt{e->lit}});
          continue;
        case ExprKind::Failed:
          set_state(cur, Cell{level, StateFailed{level}});
          continue;
        case ExprKind::ConApp: {
          std::vector<CellId> args;
          args.reserve(e->args.size());
          for (const ExprPtr& a : e->args) args.push_back(alloc_expr(a, env, level));
          set_state(cur, Cell{level, StateHeadCon{e->name, std::move(args)}});
          continue;
        }
        case ExprKind::Choice: {
          CellId l = alloc_expr(e->args[0], env, level);
          CellId r = alloc_expr(e->args[1], env, level);
          set_state(cur,
                    Cell{level, StateChoice{rt::ChoiceId::outer(next_outer_id_++), l, r}});
          continue;
        }
        case ExprKind::If: {
          CellId cond = alloc_expr(e->args[0], env, level);
          set_state(cur, Cell{level, StatePendIf{cond, e->args[1], e->args[2], env}});
          continue;
        }
        case ExprKind::FunApp: {
          if (is_builtin_function(e->name)) {
            CellId a = alloc_expr(e->args[0], env, level);
            CellId b = alloc_expr(e->args[1], env, level);
            set_state(cur, Cell{level, StatePendPrim{e->name == "+", a, b}});
            continue;
          }
          auto callee = resolve_callee(program_, e->name, /*allow_plural=*/true);
          if (!callee) throw EvalError("unknown function '" + e->name + "'");
          std::vector<CellId> args;
          args.reserve(e->args.size());
          for (const ExprPtr& a : e->args) args.push_back(alloc_expr(a, env, level));
          switch (callee->kind) {
            case Callee::Kind::Function:
              set_state(cur, Cell{level, StatePendFun{callee->def, std::move(args)}});
              break;
            case Callee::Kind::SetFunction:
              set_state(cur, Cell{level, StatePendSetFun{callee->def, std::move(args)}});
              break;
            case Callee::Kind::PluralFunction:
              throw EvalError("plural function '" + e->name +
                              "' can only be evaluated through the synthesizer");
            case Callee::Kind::Builtin:
              throw EvalError("unreachable");
          }
          continue;
        }
      }
      continue;
    }

    if (const auto* pif = std::get_if<StatePendIf>(&cells_[cur].st)) {
      const StatePendIf p = *pif;
      CellId cond_cell = 0;
      ForceOut ret;
      Step s = force_child(
          p.cond,
          [&](CellId nc) {
            return Cell{level, StatePendIf{nc, p.then_e, p.else_e, p.env}}.st;
          },
          &cond_cell, &ret);
      if (s == Step::Return) return ret;
      if (s == Step::Restart) continue;
      const auto* hc = std::get_if<StateHeadCon>(&cells_[cond_cell].st);
      if (!hc || (hc->tag != "True" && hc->tag != "False")) {
        throw EvalError("if-then-else condition is not a Bool");
      }
      set_state(cur, Cell{level, StateExpr{hc->tag == "True" ? p.then_e : p.else_e, p.env}});
      continue;
    }

    if (const auto* pp = std::get_if<StatePendPrim>(&cells_[cur].st)) {
      const StatePendPrim p = *pp;
      CellId a_cell = 0;
      ForceOut ret;
      Step s = force_child(
          p.a, [&](CellId nc) { return Cell{level, StatePendPrim{p.is_add, nc, p.b}}.st; },
          &a_cell, &ret);
      if (s == Step::Return) return ret;
      if (s == Step::Restart) continue;
      const auto* ai = std::get_if<StateHeadInt>(&cells_[a_cell].st);
      if (!ai) throw EvalError("arithmetic on a non-integer");
      const std::int64_t va = ai->v;
      CellId b_cell = 0;
      s = force_child(
          p.b, [&](CellId nc) { return Cell{level, StatePendPrim{p.is_add, a_cell, nc}}.st; },
          &b_cell, &ret);
      if (s == Step::Return) return ret;
      if (s == Step::Restart) continue;
      const auto* bi = std::get_if<StateHeadInt>(&cells_[b_cell].st);
      if (!bi) throw EvalError("arithmetic on a non-integer");
      const std::int64_t vb = bi->v;
      if (p.is_add) {
        set_state(cur, Cell{level, StateHeadInt{va + vb}});
      } else {
        set_state(cur, Cell{level, StateHeadCon{va == vb ? "True" : "False", {}}});
      }
      continue;
    }

    if (const auto* pf = std::get_if<StatePendFun>(&cells_[cur].st)) {
      const StatePendFun p = *pf;
      const FuncDef& f = *p.f;
      // union of constructor-pattern positions over all rules
      std::vector<int> positions;
      for (const Rule& r : f.rules) {
        for (int i = 0; i < static_cast<int>(r.patterns.size()); ++i) {
          if (!r.patterns[i].is_var &&
              std::find(positions.begin(), positions.end(), i) == positions.end()) {
            positions.push_back(i);
          }
        }
      }
      std::sort(positions.begin(), positions.end());
      std::vector<CellId> heads(f.arity, 0);
      bool redo = false;
      ForceOut ret;
      for (int pos : positions) {
        CellId head_cell = 0;
        Step s = force_child(
            p.args[pos],
            [&](CellId nc) {
              StatePendFun copy = p;
              copy.args[pos] = nc;
              return Cell{level, std::move(copy)}.st;
            },
            &head_cell, &ret);
        if (s == Step::Return) return ret;
        if (s == Step::Restart) {
          redo = true;
          break;
        }
        heads[pos] = head_cell;
      }
      if (redo) continue;

      std::vector<const Rule*> applicable;
      for (const Rule& r : f.rules) {
        bool ok = true;
        for (int i = 0; i < static_cast<int>(r.patterns.size()); ++i) {
          if (r.patterns[i].is_var) continue;
          const auto* hc = std::get_if<StateHeadCon>(&cells_[heads[i]].st);
          if (!hc || hc->tag != r.patterns[i].name) {
            ok = false;
            break;
          }
        }
        if (ok) applicable.push_back(&r);
      }
      if (applicable.empty()) {
        set_state(cur, Cell{level, StateFailed{level}});
        continue;
      }
      std::vector<CellId> bodies;
      bodies.reserve(applicable.size());
      for (const Rule* r : applicable) {
        auto env = std::make_shared<Env>();
        for (int i = 0; i < static_cast<int>(r->patterns.size()); ++i) {
          const Pattern& pat = r->patterns[i];
          if (pat.is_var) {
            (*env)[pat.name] = p.args[i];
          } else {
            const auto& hc = std::get<StateHeadCon>(cells_[heads[i]].st);
            for (size_t j = 0; j < pat.args.size(); ++j) {
              (*env)[pat.args[j].name] = hc.args[j];
            }
          }
        }
        bodies.push_back(alloc_expr(r->body, std::move(env), level));
      }
      CellId chain = bodies.back();
      for (int k = static_cast<int>(bodies.size()) - 2; k >= 0; --k) {
        cells_.push_back(Cell{
            level, StateChoice{rt::ChoiceId::outer(next_outer_id_++), bodies[k], chain}});
        chain = static_cast<CellId>(cells_.size() - 1);
      }
      set_state(cur, Cell{level, StateAlias{chain}});
      cur = resolve(chain);
      continue;
    }

    if (const auto* ps = std::get_if<StatePendSetFun>(&cells_[cur].st)) {
      const StatePendSetFun p = *ps;
      if (synth_handler_) {
        rt::Tree collected = synth_handler_(*this, *p.target, p.args);
        set_state(cur, Cell{level, StateSynth{std::move(collected)}});
        continue;
      }
      SetFunOut r = eval_set_fun(*p.target, p.args, level);
      switch (r.kind) {
        case SetFunOut::Kind::Value:
          set_state(cur, Cell{level, StateAlias{r.cell}});
          cur = resolve(r.cell);
          continue;
        case SetFunOut::Kind::Fail:
          set_state(cur, Cell{level, StateFailed{r.fail_level}});
          continue;
        case SetFunOut::Kind::Blocked:
          if (style == Style::Reify) {
            throw EvalError("set-function evaluation blocked during reification");
          }
          return ForceOut{ForceOut::Kind::Choice, r.cell, 0};
      }
      continue;
    }

    throw EvalError("unreachable cell state");
  }
}

Evaluator::NfOut Evaluator::normalize_full(CellId c, Style style) {
  ForceOut f = force(c, style);
  switch (f.kind) {
    case ForceOut::Kind::Fail:
      return NfOut{NfOut::Kind::Fail, 0, f.fail_level};
    case ForceOut::Kind::Choice:
      return NfOut{NfOut::Kind::Choice, f.cell, 0};
    case ForceOut::Kind::Value: {
      if (const auto* hc = std::get_if<StateHeadCon>(&cells_[f.cell].st)) {
        const std::vector<CellId> args = hc->args;
        for (CellId a : args) {
          NfOut r = normalize_full(a, style);
          if (r.kind != NfOut::Kind::Done) return r;
        }
      }
      return NfOut{NfOut::Kind::Done, f.cell, 0};
    }
  }
  throw EvalError("unreachable");
}

Evaluator::LayerResult Evaluator::run_layer(CellId root, int level) {
  LayerResult out;
  const size_t entry_mark = trail_mark();

  auto derivation = [&](auto&& self) -> bool {
    NfOut o = normalize_full(root, Style::Decide);
    switch (o.kind) {
      case NfOut::Kind::Done:
        out.values.push_back(read_back_partial(resolve(root)));
        return true;
      case NfOut::Kind::Fail:
        out.fail_levels.push_back(o.fail_level);
        return true;
      case NfOut::Kind::Choice: {
        const CellId cc = o.cell;
        const int clevel = cells_[cc].level;
        if (clevel < level) {
          out.blocked = true;
          out.blocked_cell = cc;
          return false;
        }
        if (clevel > level) {
          throw EvalError("choice escaped its encapsulation level");
        }
        if (depth_left_ <= 0) {
          truncated_ = true;
          return true;
        }
        force(cc, Style::Decide);  // cc may have been reverted by an undo
        const StateChoice ch = std::get<StateChoice>(cells_[cc].st);
        for (CellId side : {ch.left, ch.right}) {
          const size_t m = trail_mark();
          set_state(cc, Cell{clevel, StateAlias{side}});
          --depth_left_;
          bool ok = self(self);
          ++depth_left_;
          if (!ok) return false;
          undo_to(m);
        }
        return true;
      }
    }
    throw EvalError("unreachable");
  };

  if (!derivation(derivation)) {
    undo_to(entry_mark);
  }
  return out;
}

Evaluator::SetFunOut Evaluator::eval_set_fun(const FuncDef& target,
                                             const std::vector<CellId>& args,
                                             int caller_level) {
  const int n = caller_level + 1;
  cells_.push_back(Cell{n, StatePendFun{&target, args}});
  CellId app = static_cast<CellId>(cells_.size() - 1);

  LayerResult lr = run_layer(app, n);
  if (lr.blocked) {
    return SetFunOut{SetFunOut::Kind::Blocked, lr.blocked_cell, 0};
  }
  if (!lr.values.empty()) {
    return SetFunOut{SetFunOut::Kind::Value, materialize_list(lr.values, caller_level), 0};
  }
  if (lr.fail_levels.empty()) {
    // every derivation was cut by the depth bound; truncated_ is already set
    return SetFunOut{SetFunOut::Kind::Value, materialize_list({}, caller_level), 0};
  }
  const int m = *std::max_element(lr.fail_levels.begin(), lr.fail_levels.end());
  if (m >= n) {
    return SetFunOut{SetFunOut::Kind::Value, materialize_list({}, caller_level), 0};
  }
  return SetFunOut{SetFunOut::Kind::Fail, 0, m};
}

EvalOutcome Evaluator::force_hnf(CellId cell) {
  ForceOut f = force(cell, Style::Reify);
  EvalOutcome out;
  switch (f.kind) {
    case ForceOut::Kind::Fail:
      out.kind = EvalOutcome::Kind::Failure;
      out.fail_level = f.fail_level;
      return out;
    case ForceOut::Kind::Choice: {
      const auto& ch = std::get<StateChoice>(cells_[f.cell].st);
      out.kind = EvalOutcome::Kind::Split;
      out.id = ch.id;
      out.left = ch.left;
      out.right = ch.right;
      return out;
    }
    case ForceOut::Kind::Value: {
      out.kind = EvalOutcome::Kind::Value;
      if (const auto* hi = std::get_if<StateHeadInt>(&cells_[f.cell].st)) {
        out.is_int = true;
        out.num = hi->v;
      } else {
        const auto& hc = std::get<StateHeadCon>(cells_[f.cell].st);
        out.is_int = false;
        out.tag = hc.tag;
        out.args = hc.args;
      }
      return out;
    }
  }
  throw EvalError("unreachable");
}

OracleResult Evaluator::enumerate(CellId root) {
  steps_left_ = config_.step_budget;
  depth_left_ = config_.depth_bound;
  truncated_ = false;
  OracleResult out;
  try {
    LayerResult lr = run_layer(root, 0);
    if (lr.blocked) throw EvalError("top-level evaluation blocked");
    out.values = std::move(lr.values);
  } catch (const TruncatedError&) {
    truncated_ = true;
  }
  out.truncated = truncated_;
  return out;
}

Value Evaluator::read_back_partial(CellId cell) const {
  CellId c = resolve(cell);
  if (const auto* hi = std::get_if<StateHeadInt>(&cells_[c].st)) {
    return Value::integer(hi->v);
  }
  if (const auto* hc = std::get_if<StateHeadCon>(&cells_[c].st)) {
    std::vector<Value> args;
    args.reserve(hc->args.size());
    for (CellId a : hc->args) args.push_back(read_back_partial(a));
    return Value::constructor(hc->tag, std::move(args));
  }
  return Value::bottom();
}

OracleResult enumerate_values(const Program& p, const ExprPtr& e, int depth_bound) {
  Evaluator ev(p, Evaluator::Config{depth_bound, Evaluator::Config{}.step_budget});
  CellId root = ev.alloc_entry_cell(e);
  return ev.enumerate(root);
}

SetOracleResult set_function_oracle(const Program& p, const std::string& function_name,
                                    const std::vector<ExprPtr>& args, int depth_bound) {
  const FuncDef* f = p.find_function(function_name);
  if (!f) throw EvalError("unknown function '" + function_name + "'");
  if (f->arity != static_cast<int>(args.size())) {
    throw EvalError("'" + function_name + "' expects " + std::to_string(f->arity) +
                    " arguments");
  }
  Evaluator ev(p, Evaluator::Config{depth_bound, Evaluator::Config{}.step_budget});
  CellId root = ev.alloc_set_fun_app(*f, args);
  OracleResult r = ev.enumerate(root);
  SetOracleResult out;
  out.truncated = r.truncated;
  out.sets.reserve(r.values.size());
  for (const Value& v : r.values) out.sets.push_back(multiset_from_list_value(v));
  return out;
}

ValueMultiset multiset_from_list_value(const Value& v) {
  ValueMultiset out;
  const Value* cur = &v;
  while (cur->is_con() && cur->con == ":") {
    out.push_back(cur->args[0]);
    cur = &cur->args[1];
  }
  if (!cur->is_con() || cur->con != "[]") {
    throw EvalError("value is not a list");
  }
  return out;
}

}  // namespace setsynth::oracle
