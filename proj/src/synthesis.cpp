#include "setsynth/synthesis.hpp"

#include <map>
#include <set>

#include "setsynth/source.hpp"
#include "setsynth/uniform.hpp"

namespace setsynth::synth {

namespace {

using ir::IrBranch;
using ir::IrExpr;
using ir::IrExprPtr;

// Hands out pairwise disjoint sub-paths of one supply path.
struct SupplyAlloc {
  std::string cur;
  std::string fresh() {
    std::string out = cur + 'L';
    cur += 'R';
    return out;
  }
};

struct ExprCtx {
  const Program* uniform;
  const Options* opts;
  std::map<std::string, int> slots;  // variable -> frame slot
  int frame_size = 2;                // supply and level precede parameters
};

IrExprPtr level_var() { return IrExpr::var(1); }

IrExprPtr pluralize(const ExprPtr& e, ExprCtx& ctx, SupplyAlloc& alloc);

IrExprPtr choice_id_expr(ExprCtx& ctx, const std::string& path) {
  if (ctx.opts->supply_threading) {
    return IrExpr::unique_id(IrExpr::supply_path(path));
  }
  return IrExpr::fresh_id();
}

IrExprPtr pluralize(const ExprPtr& e, ExprCtx& ctx, SupplyAlloc& alloc) {
  switch (e->kind) {
    case ExprKind::Var: {
      auto it = ctx.slots.find(e->name);
      if (it == ctx.slots.end()) {
        throw CompileError(e->pos, "unbound variable '" + e->name + "' during synthesis");
      }
      return IrExpr::var(it->second);
    }
    case ExprKind::Lit:
      return IrExpr::val_int(e->lit);
    case ExprKind::Failed:
      return IrExpr::fail(level_var());
    case ExprKind::ConApp: {
      std::vector<IrExprPtr> args;
      args.reserve(e->args.size());
      for (const ExprPtr& a : e->args) args.push_back(pluralize(a, ctx, alloc));
      return IrExpr::val_con(e->name, std::move(args));
    }
    case ExprKind::Choice: {
      std::string base = alloc.fresh();
      SupplyAlloc left{base + 'L'};
      SupplyAlloc right{base + 'R'};
      IrExprPtr l = pluralize(e->args[0], ctx, left);
      IrExprPtr r = pluralize(e->args[1], ctx, right);
      return IrExpr::choice(choice_id_expr(ctx, base), level_var(), std::move(l), std::move(r));
    }
    case ExprKind::If: {
      IrExprPtr scrut = pluralize(e->args[0], ctx, alloc);
      int saved = ctx.frame_size;
      std::vector<IrBranch> branches;
      IrBranch t{"True", {}, saved, pluralize(e->args[1], ctx, alloc)};
      IrBranch f{"False", {}, saved, pluralize(e->args[2], ctx, alloc)};
      branches.push_back(std::move(t));
      branches.push_back(std::move(f));
      return IrExpr::case_st(std::move(scrut), std::move(branches));
    }
    case ExprKind::FunApp: {
      if (is_builtin_function(e->name)) {
        IrExprPtr a = pluralize(e->args[0], ctx, alloc);
        IrExprPtr b = pluralize(e->args[1], ctx, alloc);
        return IrExpr::prim(e->name == "+", std::move(a), std::move(b));
      }
      auto callee = resolve_callee(*ctx.uniform, e->name);
      if (!callee) {
        throw CompileError(e->pos, "unknown function '" + e->name + "' during synthesis");
      }
      std::string plural_name;
      switch (callee->kind) {
        case Callee::Kind::Function:
          plural_name = e->name + "P";
          break;
        case Callee::Kind::SetFunction:
          plural_name = e->name + "P";  // gS becomes gSP
          break;
        default:
          throw CompileError(e->pos, "'" + e->name + "' cannot be used here");
      }
      std::vector<IrExprPtr> args;
      args.reserve(e->args.size() + 2);
      args.push_back(IrExpr::supply_path(alloc.fresh()));
      args.push_back(level_var());
      for (const ExprPtr& a : e->args) args.push_back(pluralize(a, ctx, alloc));
      return IrExpr::call(std::move(plural_name), std::move(args));
    }
  }
  throw EvalError("unreachable");
}

bool expr_right_linear(const ExprPtr& e, std::map<std::string, int>& uses) {
  switch (e->kind) {
    case ExprKind::Var:
      return ++uses[e->name] <= 1;
    case ExprKind::Lit:
    case ExprKind::Failed:
      return true;
    default: {
      for (const ExprPtr& a : e->args) {
        if (!expr_right_linear(a, uses)) return false;
      }
      return true;
    }
  }
}

bool function_right_linear(const FuncDef& f) {
  for (const Rule& r : f.rules) {
    std::map<std::string, int> uses;
    if (!expr_right_linear(r.body, uses)) return false;
  }
  return true;
}

void collect_callees(const ExprPtr& e, const Program& uniform,
                     std::set<std::string>& funs, std::set<std::string>& setfuns) {
  if (e->kind == ExprKind::FunApp && !is_builtin_function(e->name)) {
    auto callee = resolve_callee(uniform, e->name);
    if (callee) {
      if (callee->kind == Callee::Kind::Function) funs.insert(e->name);
      if (callee->kind == Callee::Kind::SetFunction) setfuns.insert(callee->def->name);
    }
  }
  for (const ExprPtr& a : e->args) collect_callees(a, uniform, funs, setfuns);
}

void ensure_plural(ir::IrBundle& b, const std::string& fname, const Options& opts);

void ensure_plural_set(ir::IrBundle& b, const std::string& fname, const Options& opts) {
  const FuncDef* f = b.uniform.find_function(fname);
  if (!f) throw EvalError("unknown function '" + fname + "'");
  if (!b.find_function(fname + "SP")) {
    b.functions.push_back(synthesize_plural_set_function(b.uniform, *f, opts));
  }
  ensure_plural(b, fname, opts);
}

void ensure_plural(ir::IrBundle& b, const std::string& fname, const Options& opts) {
  if (b.find_function(fname + "P")) return;
  const FuncDef* f = b.uniform.find_function(fname);
  if (!f) throw EvalError("unknown function '" + fname + "'");
  b.functions.push_back(pluralize_function(b.uniform, *f, opts));
  std::set<std::string> funs, setfuns;
  for (const Rule& r : f->rules) collect_callees(r.body, b.uniform, funs, setfuns);
  for (const std::string& g : funs) ensure_plural(b, g, opts);
  for (const std::string& g : setfuns) ensure_plural_set(b, g, opts);
}

}  // namespace

ir::NdDataDecl gen_nd_type(const DataDecl& d) {
  ir::NdDataDecl nd;
  nd.name = d.name;
  for (const ConDecl& c : d.constructors) {
    nd.constructors.push_back(ir::NdConDecl{c.name, c.arity()});
  }
  return nd;
}

std::vector<ir::NdDataDecl> gen_nd_types(const Program& p) {
  std::vector<ir::NdDataDecl> out;
  out.reserve(p.data_decls.size());
  for (const DataDecl& d : p.data_decls) out.push_back(gen_nd_type(d));
  return out;
}

ir::NfOp gen_nf(const ir::NdDataDecl& d) { return ir::NfOp{d.name, d}; }

ir::ConvertOps gen_convert(const DataDecl& d) {
  return ir::ConvertOps{d.name, gen_nd_type(d)};
}

ir::IrExprPtr pluralize_expr(const Program& uniform, const ExprPtr& e,
                             const std::vector<std::string>& params, const Options& opts) {
  ExprCtx ctx;
  ctx.uniform = &uniform;
  ctx.opts = &opts;
  for (size_t i = 0; i < params.size(); ++i) ctx.slots[params[i]] = 2 + static_cast<int>(i);
  ctx.frame_size = 2 + static_cast<int>(params.size());
  SupplyAlloc alloc{""};
  return pluralize(e, ctx, alloc);
}

ir::IrFunction pluralize_function(const Program& uniform, const FuncDef& f,
                                  const Options& opts) {
  ir::IrFunction out;
  out.name = f.name + "P";
  out.source = f.name;
  out.tree_arity = f.arity;
  out.right_linear = function_right_linear(f);

  // parameter names from the first rule; variable positions only
  const Rule& first = f.rules.front();
  out.params = {"s", "e"};
  for (int i = 0; i < f.arity; ++i) {
    out.params.push_back(first.patterns[i].is_var ? first.patterns[i].name
                                                  : "x" + std::to_string(i));
  }

  ExprCtx ctx;
  ctx.uniform = &uniform;
  ctx.opts = &opts;
  for (int i = 0; i < f.arity; ++i) ctx.slots[out.params[2 + i]] = 2 + i;
  ctx.frame_size = 2 + f.arity;
  SupplyAlloc fn_alloc{""};

  // single variable rule: translate the body directly
  int match_pos = -1;
  for (int i = 0; i < f.arity; ++i) {
    if (!first.patterns[i].is_var) match_pos = i;
  }
  if (match_pos < 0) {
    if (f.rules.size() != 1) {
      throw EvalError("function '" + f.name + "' is not in standard form");
    }
    out.body = pluralize(first.body, ctx, fn_alloc);
    return out;
  }

  std::vector<IrBranch> branches;
  for (const Rule& r : f.rules) {
    const Pattern& pat = r.patterns[match_pos];
    IrBranch br;
    br.tag = pat.name;
    br.first_slot = ctx.frame_size;
    ExprCtx bctx = ctx;
    for (size_t j = 0; j < pat.args.size(); ++j) {
      br.binders.push_back(pat.args[j].name);
      bctx.slots[pat.args[j].name] = bctx.frame_size++;
    }
    // non-matched positions of this rule keep the canonical names
    for (int i = 0; i < f.arity; ++i) {
      if (i != match_pos) bctx.slots[r.patterns[i].name] = 2 + i;
    }
    SupplyAlloc balloc{fn_alloc.fresh()};
    br.body = pluralize(r.body, bctx, balloc);
    branches.push_back(std::move(br));
  }
  out.body = IrExpr::case_st(IrExpr::var(2 + match_pos), std::move(branches));
  return out;
}

ir::IrFunction synthesize_plural_set_function(const Program& uniform, const FuncDef& f,
                                              const Options& opts) {
  (void)uniform;
  (void)opts;
  ir::IrFunction out;
  out.name = f.name + "SP";
  out.source = f.name;
  out.is_set_plural = true;
  out.tree_arity = f.arity;
  out.params = {"s", "e"};
  for (int i = 0; i < f.arity; ++i) out.params.push_back("x" + std::to_string(i));

  IrExprPtr deeper = IrExpr::int_add(IrExpr::var(1), IrExpr::int_const(1));
  std::vector<IrExprPtr> call_args;
  call_args.push_back(IrExpr::supply_path("L"));
  call_args.push_back(deeper);
  for (int i = 0; i < f.arity; ++i) call_args.push_back(IrExpr::var(2 + i));
  out.body = IrExpr::collect_vals(IrExpr::int_add(IrExpr::var(1), IrExpr::int_const(1)),
                                  IrExpr::call(f.name + "P", std::move(call_args)));
  return out;
}

void synthesize_set_function(ir::IrBundle& bundle, const std::string& fname,
                             const Options& opts) {
  const FuncDef* f = bundle.uniform.find_function(fname);
  if (!f) throw EvalError("unknown target '" + fname + "'");
  ensure_plural(bundle, fname, opts);
  if (!bundle.find_set_function(fname + "S")) {
    bundle.set_functions.push_back(ir::SetFunDef{fname + "S", fname, fname + "P", f->arity});
  }
}

ir::IrBundle emit_program(const Program& source, const std::vector<std::string>& targets,
                          const Options& opts) {
  ir::IrBundle b;
  b.source = source;
  b.uniform = uniformize(source);
  b.supply_threading = opts.supply_threading;
  auto diags = validate_uniform(b.uniform);
  if (!diags.empty()) throw CompileError(diags.front());
  b.nd_types = gen_nd_types(b.uniform);
  for (const DataDecl& d : b.uniform.data_decls) {
    b.nf_ops.push_back(gen_nf(gen_nd_type(d)));
    b.convert_ops.push_back(gen_convert(d));
  }
  for (const std::string& t : targets) synthesize_set_function(b, t, opts);
  return b;
}

bool closure_right_linear(const Program& uniform, const std::string& fname) {
  std::set<std::string> visited;
  std::set<std::string> work{fname};
  while (!work.empty()) {
    std::string g = *work.begin();
    work.erase(work.begin());
    if (!visited.insert(g).second) continue;
    const FuncDef* f = uniform.find_function(g);
    if (!f) continue;
    if (!function_right_linear(*f)) return false;
    std::set<std::string> funs, setfuns;
    for (const Rule& r : f->rules) collect_callees(r.body, uniform, funs, setfuns);
    for (const std::string& h : funs) work.insert(h);
    for (const std::string& h : setfuns) work.insert(h);
  }
  return true;
}

}  // namespace setsynth::synth
