#include "setsynth/ir.hpp"

#include <sstream>

#include "setsynth/source.hpp"

namespace setsynth::ir {

namespace {
std::shared_ptr<IrExpr> mut(IrKind k) {
  auto e = std::make_shared<IrExpr>();
  e->kind = k;
  return e;
}
}  // namespace

IrExprPtr IrExpr::var(int slot) {
  auto e = mut(IrKind::Var);
  e->slot = slot;
  return e;
}
IrExprPtr IrExpr::val_int(std::int64_t v) {
  auto e = mut(IrKind::ValInt);
  e->num = v;
  return e;
}
IrExprPtr IrExpr::val_con(std::string tag, std::vector<IrExprPtr> as) {
  auto e = mut(IrKind::ValCon);
  e->name = std::move(tag);
  e->args = std::move(as);
  return e;
}
IrExprPtr IrExpr::fail(IrExprPtr level) {
  auto e = mut(IrKind::Fail);
  e->args = {std::move(level)};
  return e;
}
IrExprPtr IrExpr::choice(IrExprPtr id, IrExprPtr level, IrExprPtr l, IrExprPtr r) {
  auto e = mut(IrKind::Choice);
  e->args = {std::move(id), std::move(level), std::move(l), std::move(r)};
  return e;
}
IrExprPtr IrExpr::case_st(IrExprPtr scrutinee, std::vector<IrBranch> branches) {
  auto e = mut(IrKind::CaseSt);
  e->args = {std::move(scrutinee)};
  e->branches = std::move(branches);
  return e;
}
IrExprPtr IrExpr::call(std::string fn, std::vector<IrExprPtr> as) {
  auto e = mut(IrKind::Call);
  e->name = std::move(fn);
  e->args = std::move(as);
  return e;
}
IrExprPtr IrExpr::supply_path(std::string path) {
  auto e = mut(IrKind::SupplyPath);
  e->name = std::move(path);
  return e;
}
IrExprPtr IrExpr::unique_id(IrExprPtr supply) {
  auto e = mut(IrKind::UniqueId);
  e->args = {std::move(supply)};
  return e;
}
IrExprPtr IrExpr::fresh_id() { return mut(IrKind::FreshId); }
IrExprPtr IrExpr::int_const(std::int64_t v) {
  auto e = mut(IrKind::IntConst);
  e->num = v;
  return e;
}
IrExprPtr IrExpr::int_add(IrExprPtr a, IrExprPtr b) {
  auto e = mut(IrKind::IntAdd);
  e->args = {std::move(a), std::move(b)};
  return e;
}
IrExprPtr IrExpr::collect_vals(IrExprPtr level, IrExprPtr tree) {
  auto e = mut(IrKind::CollectVals);
  e->args = {std::move(level), std::move(tree)};
  return e;
}
IrExprPtr IrExpr::prim(bool add, IrExprPtr a, IrExprPtr b) {
  auto e = mut(add ? IrKind::PrimAdd : IrKind::PrimEq);
  e->args = {std::move(a), std::move(b)};
  return e;
}

rt::Tree NfOp::normalize(const rt::Hnf& h) const {
  if (!h.is_int) {
    bool known = false;
    for (const NdConDecl& c : decl.constructors) known |= (c.tag == h.tag);
    if (!known) {
      throw EvalError("constructor '" + h.tag + "' does not belong to type " + type_name);
    }
  }
  return rt::nf_hnf(h, rt::make_generic_nf());
}

Value ConvertOps::from_val_st(const rt::Tree& fully_evaluated) const {
  Value v = rt::value_from_tree(fully_evaluated);
  if (v.is_con()) {
    bool known = false;
    for (const NdConDecl& c : decl.constructors) known |= (c.tag == v.con);
    if (!known) {
      throw EvalError("constructor '" + v.con + "' does not belong to type " + type_name);
    }
  }
  return v;
}

const IrFunction* IrBundle::find_function(const std::string& name) const {
  for (const IrFunction& f : functions) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

const SetFunDef* IrBundle::find_set_function(const std::string& wrapper_name) const {
  for (const SetFunDef& f : set_functions) {
    if (f.name == wrapper_name) return &f;
  }
  return nullptr;
}

namespace {

struct Names {
  std::vector<std::string> by_slot;
  std::string slot_name(int slot) const {
    if (slot < static_cast<int>(by_slot.size()) && !by_slot[slot].empty()) {
      return by_slot[slot];
    }
    return "t" + std::to_string(slot);
  }
};

void print_expr(std::ostream& out, const IrExprPtr& e, const Names& names, int indent);

void print_args(std::ostream& out, const std::vector<IrExprPtr>& args, const Names& names,
                int indent, size_t from = 0) {
  out << '(';
  for (size_t i = from; i < args.size(); ++i) {
    if (i > from) out << ", ";
    print_expr(out, args[i], names, indent);
  }
  out << ')';
}

void collect_binder_names(const IrExprPtr& e, std::vector<std::string>& names) {
  // binder slots are assigned depth-first, so a flat scan recovers names
  if (e->kind == IrKind::CaseSt) {
    for (const IrBranch& b : e->branches) {
      for (size_t i = 0; i < b.binders.size(); ++i) {
        size_t slot = b.first_slot + i;
        if (names.size() <= slot) names.resize(slot + 1);
        names[slot] = b.binders[i];
      }
      collect_binder_names(b.body, names);
    }
  }
  for (const IrExprPtr& a : e->args) collect_binder_names(a, names);
}

void print_expr(std::ostream& out, const IrExprPtr& e, const Names& names, int indent) {
  auto pad = [&](int n) {
    for (int i = 0; i < n; ++i) out << "  ";
  };
  switch (e->kind) {
    case IrKind::Var:
      out << names.slot_name(e->slot);
      return;
    case IrKind::ValInt:
      out << "Val " << e->num;
      return;
    case IrKind::ValCon:
      out << "Val (" << e->name;
      for (const IrExprPtr& a : e->args) {
        out << ' ';
        bool atom = a->kind == IrKind::Var || a->kind == IrKind::ValInt;
        if (!atom) out << '(';
        print_expr(out, a, names, indent);
        if (!atom) out << ')';
      }
      out << ')';
      return;
    case IrKind::Fail:
      out << "Fail ";
      print_expr(out, e->args[0], names, indent);
      return;
    case IrKind::Choice:
      out << "Choice";
      print_args(out, e->args, names, indent);
      return;
    case IrKind::CaseSt:
      out << "caseST ";
      print_expr(out, e->args[0], names, indent);
      out << " of";
      for (const IrBranch& b : e->branches) {
        out << '\n';
        pad(indent + 1);
        out << (b.tag == ":" ? "(:)" : b.tag);
        if (!b.binders.empty()) {
          out << '(';
          for (size_t i = 0; i < b.binders.size(); ++i) {
            if (i) out << ", ";
            out << b.binders[i];
          }
          out << ')';
        }
        out << " -> ";
        print_expr(out, b.body, names, indent + 2);
      }
      return;
    case IrKind::Call:
      out << e->name;
      print_args(out, e->args, names, indent);
      return;
    case IrKind::SupplyPath:
      out << 's' << e->name;
      return;
    case IrKind::UniqueId:
      out << "uid(";
      print_expr(out, e->args[0], names, indent);
      out << ')';
      return;
    case IrKind::FreshId:
      out << "freshId";
      return;
    case IrKind::IntConst:
      out << e->num;
      return;
    case IrKind::IntAdd:
      print_expr(out, e->args[0], names, indent);
      out << '+';
      print_expr(out, e->args[1], names, indent);
      return;
    case IrKind::CollectVals:
      out << "stValuesP";
      print_args(out, e->args, names, indent);
      return;
    case IrKind::PrimAdd:
    case IrKind::PrimEq:
      out << (e->kind == IrKind::PrimAdd ? "primAdd" : "primEq");
      print_args(out, e->args, names, indent);
      return;
  }
}

}  // namespace

std::string dump_function(const IrFunction& f) {
  std::ostringstream out;
  Names names;
  for (const std::string& p : f.params) names.by_slot.push_back(p);
  collect_binder_names(f.body, names.by_slot);
  out << (f.is_set_plural ? "pluralset " : "plural ") << f.name << '(';
  for (size_t i = 0; i < f.params.size(); ++i) {
    if (i) out << ", ";
    out << f.params[i];
  }
  out << ") =\n  ";
  print_expr(out, f.body, names, 1);
  out << '\n';
  return out.str();
}

std::string dump_bundle(const IrBundle& b) {
  std::ostringstream out;
  out << "-- setsynth IR bundle\n";
  out << "-- supply threading: " << (b.supply_threading ? "on" : "off") << "\n\n";
  for (const NdDataDecl& d : b.nd_types) {
    out << "ndtype " << d.name << " =";
    for (size_t i = 0; i < d.constructors.size(); ++i) {
      if (i) out << " |";
      const NdConDecl& c = d.constructors[i];
      out << ' ' << (c.tag == ":" ? "(:)" : c.tag);
      for (int j = 0; j < c.arity; ++j) out << " ST";
    }
    out << '\n';
  }
  out << '\n';
  for (const NfOp& op : b.nf_ops) out << "nf " << op.type_name << '\n';
  for (const ConvertOps& op : b.convert_ops) out << "convert " << op.type_name << '\n';
  out << '\n';
  for (const IrFunction& f : b.functions) {
    out << "-- right-linear: " << (f.right_linear ? "yes" : "no") << '\n';
    out << dump_function(f) << '\n';
  }
  for (const SetFunDef& sf : b.set_functions) {
    out << "setfun " << sf.name << "/" << sf.arity << " = fromST . " << sf.plural
        << "(initSupply, 1)";
    if (sf.arity > 0) out << " . toST each argument";
    out << '\n';
  }
  return out.str();
}

}  // namespace setsynth::ir
