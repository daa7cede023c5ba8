#include "setsynth/machine.hpp"

#include "setsynth/source.hpp"

namespace setsynth::rt {

using ir::IrExprPtr;
using ir::IrKind;

Machine::Machine(std::shared_ptr<const ir::IrBundle> bundle, oracle::Evaluator& host)
    : bundle_(std::move(bundle)),
      host_(&host),
      nf_(make_generic_nf()),
      local_ids_(std::make_shared<std::uint64_t>(0)) {}

SuspensionPtr Machine::suspend(oracle::CellId cell) {
  auto self = shared_from_this();
  return make_suspension([self, cell]() -> SuspResult {
    oracle::EvalOutcome o = self->host_->force_hnf(cell);
    SuspResult r;
    switch (o.kind) {
      case oracle::EvalOutcome::Kind::Failure:
        r.kind = SuspResult::Kind::Fail;
        r.fail_level = o.fail_level;
        return r;
      case oracle::EvalOutcome::Kind::Split:
        r.kind = SuspResult::Kind::Split;
        r.id = o.id;
        r.left = self->suspend(o.left);
        r.right = self->suspend(o.right);
        return r;
      case oracle::EvalOutcome::Kind::Value: {
        r.kind = SuspResult::Kind::Head;
        if (o.is_int) {
          r.head = Hnf::integer(o.num);
        } else {
          std::vector<Tree> args;
          args.reserve(o.args.size());
          for (oracle::CellId a : o.args) args.push_back(Tree::unevaluated(self->suspend(a)));
          r.head = Hnf::con(o.tag, std::move(args));
        }
        return r;
      }
    }
    throw EvalError("unreachable");
  });
}

Tree Machine::to_st(oracle::CellId cell) { return Tree::unevaluated(suspend(cell)); }

Tree Machine::lazy_tree(const ir::IrExprPtr& e, const EnvPtr& env) {
  if (e->kind == IrKind::Var) return eval_tree(e, env);
  auto self = shared_from_this();
  return Tree::lazy([self, e, env] { return self->eval_tree(e, env); });
}

Tree Machine::eval_tree(const ir::IrExprPtr& e, const EnvPtr& env) {
  RtValue v = eval(e, env);
  if (auto* t = std::get_if<Tree>(&v)) return std::move(*t);
  throw EvalError("synthesized expression did not evaluate to a tree");
}

std::int64_t Machine::eval_int(const ir::IrExprPtr& e, const EnvPtr& env) {
  RtValue v = eval(e, env);
  if (auto* n = std::get_if<std::int64_t>(&v)) return *n;
  throw EvalError("synthesized expression did not evaluate to an integer");
}

Machine::RtValue Machine::eval(const ir::IrExprPtr& e, const EnvPtr& env) {
  switch (e->kind) {
    case IrKind::Var:
      return (*env)[e->slot];
    case IrKind::ValInt:
      return Tree::value(Hnf::integer(e->num));
    case IrKind::ValCon: {
      std::vector<Tree> args;
      args.reserve(e->args.size());
      for (const IrExprPtr& a : e->args) args.push_back(lazy_tree(a, env));
      return Tree::value(Hnf::con(e->name, std::move(args)));
    }
    case IrKind::Fail:
      return Tree::fail(static_cast<int>(eval_int(e->args[0], env)));
    case IrKind::Choice: {
      RtValue idv = eval(e->args[0], env);
      auto* id = std::get_if<ChoiceId>(&idv);
      if (!id) throw EvalError("choice identifier expected");
      int level = static_cast<int>(eval_int(e->args[1], env));
      return Tree::choice(*id, level, lazy_tree(e->args[2], env), lazy_tree(e->args[3], env));
    }
    case IrKind::CaseSt: {
      Tree scrut = eval_tree(e->args[0], env);
      auto self = shared_from_this();
      auto dispatch = [self, e, env](const Hnf& h) -> Tree {
        if (h.is_int) {
          throw EvalError("case on an integer value");
        }
        for (const ir::IrBranch& b : e->branches) {
          if (b.tag != h.tag) continue;
          if (b.binders.size() != h.args.size()) {
            throw EvalError("constructor arity mismatch in synthesized case");
          }
          auto env2 = std::make_shared<Env>(*env);
          for (const Tree& a : h.args) env2->push_back(a);
          return self->lazy_tree(b.body, env2);
        }
        throw EvalError("no case branch for constructor '" + h.tag + "'");
      };
      return apply_st(dispatch, std::move(scrut));
    }
    case IrKind::Call: {
      auto self = shared_from_this();
      return Tree::lazy([self, e, env] {
        const ir::IrFunction* fn = self->bundle_->find_function(e->name);
        if (!fn) throw EvalError("unknown synthesized function '" + e->name + "'");
        auto env2 = std::make_shared<Env>();
        env2->reserve(e->args.size());
        RtValue sup = self->eval(e->args[0], env);
        env2->push_back(std::move(sup));
        env2->push_back(self->eval_int(e->args[1], env));
        for (size_t i = 2; i < e->args.size(); ++i) {
          env2->push_back(self->lazy_tree(e->args[i], env));
        }
        return self->eval_tree(fn->body, env2);
      });
    }
    case IrKind::SupplyPath: {
      const RtValue& base = (*env)[0];
      const auto* s = std::get_if<IdSupply>(&base);
      if (!s) throw EvalError("supply parameter expected");
      IdSupply out = *s;
      for (char c : e->name) out.path += (c == 'L' ? '0' : '1');
      return out;
    }
    case IrKind::UniqueId: {
      RtValue sv = eval(e->args[0], env);
      const auto* s = std::get_if<IdSupply>(&sv);
      if (!s) throw EvalError("supply expected");
      return unique_id(*s);
    }
    case IrKind::FreshId:
      return ChoiceId::local((*local_ids_)++);
    case IrKind::IntConst:
      return e->num;
    case IrKind::IntAdd:
      return eval_int(e->args[0], env) + eval_int(e->args[1], env);
    case IrKind::CollectVals: {
      int level = static_cast<int>(eval_int(e->args[0], env));
      Tree t = lazy_tree(e->args[1], env);
      auto self = shared_from_this();
      return Tree::lazy([self, level, t] { return st_values_p(level, t, self->nf_); });
    }
    case IrKind::PrimAdd:
    case IrKind::PrimEq: {
      const bool add = e->kind == IrKind::PrimAdd;
      Tree a = lazy_tree(e->args[0], env);
      Tree b = lazy_tree(e->args[1], env);
      auto outer = [add, b](const Hnf& ha) -> Tree {
        if (!ha.is_int) throw EvalError("arithmetic on a non-integer");
        std::int64_t va = ha.num;
        auto inner = [add, va](const Hnf& hb) -> Tree {
          if (!hb.is_int) throw EvalError("arithmetic on a non-integer");
          if (add) return Tree::value(Hnf::integer(va + hb.num));
          return Tree::value(Hnf::con(va == hb.num ? "True" : "False", {}));
        };
        return apply_st(inner, b);
      };
      return apply_st(outer, std::move(a));
    }
  }
  throw EvalError("unreachable");
}

Tree Machine::call_plural(const std::string& name, std::vector<Tree> args) {
  auto self = shared_from_this();
  return Tree::lazy([self, name, args = std::move(args)] {
    const ir::IrFunction* fn = self->bundle_->find_function(name);
    if (!fn) throw EvalError("unknown synthesized function '" + name + "'");
    if (fn->tree_arity != static_cast<int>(args.size())) {
      throw EvalError("'" + name + "' expects " + std::to_string(fn->tree_arity) +
                      " arguments");
    }
    auto env = std::make_shared<Env>();
    env->push_back(init_supply());
    env->push_back(std::int64_t{1});
    for (const Tree& a : args) env->push_back(a);
    return self->eval_tree(fn->body, env);
  });
}

Tree Machine::set_function_collected(const std::string& target,
                                     const std::vector<oracle::CellId>& args) {
  const ir::SetFunDef* sf = bundle_->find_set_function(target + "S");
  if (!sf) throw EvalError("no synthesized set function for '" + target + "'");
  std::vector<Tree> trees;
  trees.reserve(args.size());
  for (oracle::CellId c : args) trees.push_back(to_st(c));
  Tree result = call_plural(sf->plural, std::move(trees));
  auto self = shared_from_this();
  return Tree::lazy([self, result] { return st_values_p(1, result, self->nf_); });
}

std::vector<World> Machine::worlds(Tree collected, Strategy strategy, size_t max_worlds,
                                   size_t max_values_per_world) const {
  return collect_worlds(std::move(collected), strategy, max_worlds, max_values_per_world);
}

void Machine::install(const std::shared_ptr<Machine>& m) {
  m->host_->set_synth_handler(
      [m](oracle::Evaluator&, const FuncDef& target, const std::vector<oracle::CellId>& args) {
        return m->set_function_collected(target.name, args);
      });
}

}  // namespace setsynth::rt
