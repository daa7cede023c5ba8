#include "setsynth/ast.hpp"

#include <algorithm>

namespace setsynth {

ExprPtr Expr::var(std::string n, SourcePos p) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Var;
  e->pos = p;
  e->name = std::move(n);
  return e;
}

ExprPtr Expr::literal(std::int64_t v, SourcePos p) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Lit;
  e->pos = p;
  e->lit = v;
  return e;
}

ExprPtr Expr::con(std::string n, std::vector<ExprPtr> as, SourcePos p) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::ConApp;
  e->pos = p;
  e->name = std::move(n);
  e->args = std::move(as);
  return e;
}

ExprPtr Expr::app(std::string n, std::vector<ExprPtr> as, SourcePos p) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::FunApp;
  e->pos = p;
  e->name = std::move(n);
  e->args = std::move(as);
  return e;
}

ExprPtr Expr::choice(ExprPtr l, ExprPtr r, SourcePos p) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Choice;
  e->pos = p;
  e->args = {std::move(l), std::move(r)};
  return e;
}

ExprPtr Expr::failed(SourcePos p) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Failed;
  e->pos = p;
  return e;
}

ExprPtr Expr::if_then_else(ExprPtr c, ExprPtr t, ExprPtr e2, SourcePos p) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::If;
  e->pos = p;
  e->args = {std::move(c), std::move(t), std::move(e2)};
  return e;
}

const DataDecl* Program::find_data(const std::string& type_name) const {
  for (const DataDecl& d : data_decls) {
    if (d.name == type_name) return &d;
  }
  return nullptr;
}

const FuncDef* Program::find_function(const std::string& name) const {
  for (const FuncDef& f : func_defs) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

const DataDecl* Program::find_constructor(const std::string& tag, int* arity) const {
  for (const DataDecl& d : data_decls) {
    for (const ConDecl& c : d.constructors) {
      if (c.name == tag) {
        if (arity) *arity = c.arity();
        return &d;
      }
    }
  }
  return nullptr;
}

std::vector<DataDecl> prelude_decls() {
  DataDecl boolean;
  boolean.name = "Bool";
  boolean.constructors = {{"False", {}}, {"True", {}}};
  boolean.builtin = true;

  DataDecl list;
  list.name = "List";
  list.constructors = {{"[]", {}}, {":", {"a", "[a]"}}};
  list.builtin = true;

  return {boolean, list};
}

Program program_with_prelude() {
  Program p;
  p.data_decls = prelude_decls();
  return p;
}

bool is_builtin_function(const std::string& name) {
  return name == "+" || name == "==";
}

std::optional<Callee> resolve_callee(const Program& p, const std::string& name,
                                     bool allow_plural) {
  if (const FuncDef* f = p.find_function(name)) {
    return Callee{Callee::Kind::Function, f, f->arity};
  }
  if (is_builtin_function(name)) {
    return Callee{Callee::Kind::Builtin, nullptr, 2};
  }
  if (name.size() > 1 && name.back() == 'S') {
    if (const FuncDef* f = p.find_function(name.substr(0, name.size() - 1))) {
      return Callee{Callee::Kind::SetFunction, f, f->arity};
    }
  }
  if (allow_plural && name.size() > 1 && name.back() == 'P') {
    if (const FuncDef* f = p.find_function(name.substr(0, name.size() - 1))) {
      return Callee{Callee::Kind::PluralFunction, f, f->arity};
    }
  }
  return std::nullopt;
}

bool ast_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->name != b->name || a->lit != b->lit ||
      a->args.size() != b->args.size()) {
    return false;
  }
  for (size_t i = 0; i < a->args.size(); ++i) {
    if (!ast_equal(a->args[i], b->args[i])) return false;
  }
  return true;
}

bool ast_equal(const Pattern& a, const Pattern& b) {
  if (a.is_var != b.is_var || a.name != b.name || a.args.size() != b.args.size()) {
    return false;
  }
  for (size_t i = 0; i < a.args.size(); ++i) {
    if (!ast_equal(a.args[i], b.args[i])) return false;
  }
  return true;
}

bool ast_equal(const Program& a, const Program& b) {
  if (a.data_decls.size() != b.data_decls.size()) return false;
  for (size_t i = 0; i < a.data_decls.size(); ++i) {
    const DataDecl& x = a.data_decls[i];
    const DataDecl& y = b.data_decls[i];
    if (x.name != y.name || x.constructors.size() != y.constructors.size()) return false;
    for (size_t j = 0; j < x.constructors.size(); ++j) {
      if (x.constructors[j].name != y.constructors[j].name ||
          x.constructors[j].arg_types != y.constructors[j].arg_types) {
        return false;
      }
    }
  }
  if (a.func_defs.size() != b.func_defs.size()) return false;
  for (size_t i = 0; i < a.func_defs.size(); ++i) {
    const FuncDef& x = a.func_defs[i];
    const FuncDef& y = b.func_defs[i];
    if (x.name != y.name || x.arity != y.arity || x.rules.size() != y.rules.size()) {
      return false;
    }
    for (size_t j = 0; j < x.rules.size(); ++j) {
      const Rule& r = x.rules[j];
      const Rule& s = y.rules[j];
      if (r.patterns.size() != s.patterns.size()) return false;
      for (size_t k = 0; k < r.patterns.size(); ++k) {
        if (!ast_equal(r.patterns[k], s.patterns[k])) return false;
      }
      if (!ast_equal(r.body, s.body)) return false;
    }
  }
  return true;
}

ExprPtr rename_vars(const ExprPtr& e,
                    const std::vector<std::pair<std::string, std::string>>& renaming) {
  switch (e->kind) {
    case ExprKind::Var: {
      for (const auto& [from, to] : renaming) {
        if (e->name == from) return Expr::var(to, e->pos);
      }
      return e;
    }
    case ExprKind::Lit:
    case ExprKind::Failed:
      return e;
    default: {
      std::vector<ExprPtr> as;
      as.reserve(e->args.size());
      bool changed = false;
      for (const ExprPtr& a : e->args) {
        ExprPtr a2 = rename_vars(a, renaming);
        changed |= (a2 != a);
        as.push_back(std::move(a2));
      }
      if (!changed) return e;
      auto e2 = std::make_shared<Expr>(*e);
      e2->args = std::move(as);
      return e2;
    }
  }
}

ExprPtr substitute_var(const ExprPtr& e, const std::string& var, const ExprPtr& replacement) {
  switch (e->kind) {
    case ExprKind::Var:
      return e->name == var ? replacement : e;
    case ExprKind::Lit:
    case ExprKind::Failed:
      return e;
    default: {
      std::vector<ExprPtr> as;
      as.reserve(e->args.size());
      bool changed = false;
      for (const ExprPtr& a : e->args) {
        ExprPtr a2 = substitute_var(a, var, replacement);
        changed |= (a2 != a);
        as.push_back(std::move(a2));
      }
      if (!changed) return e;
      auto e2 = std::make_shared<Expr>(*e);
      e2->args = std::move(as);
      return e2;
    }
  }
}

}  // namespace setsynth
