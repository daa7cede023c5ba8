#include "setsynth/pretty.hpp"

#include <sstream>

namespace setsynth {
namespace {

// Binding strengths; a child is parenthesized when it binds looser than its
// context requires. Application arguments require atoms.
constexpr int kPrecChoice = 0;
constexpr int kPrecEq = 1;
constexpr int kPrecCons = 2;
constexpr int kPrecAdd = 3;
constexpr int kPrecApp = 4;
constexpr int kPrecAtom = 5;

bool is_list_expr(const ExprPtr& e) {
  const Expr* cur = e.get();
  while (cur->kind == ExprKind::ConApp && cur->name == ":") {
    cur = cur->args[1].get();
  }
  return cur->kind == ExprKind::ConApp && cur->name == "[]";
}

void print_expr(std::ostream& out, const ExprPtr& e, int min_prec) {
  auto paren = [&](int prec, auto&& body) {
    if (prec < min_prec) {
      out << '(';
      body();
      out << ')';
    } else {
      body();
    }
  };
  switch (e->kind) {
    case ExprKind::Var:
      out << e->name;
      return;
    case ExprKind::Lit:
      out << e->lit;
      return;
    case ExprKind::Failed:
      out << "failed";
      return;
    case ExprKind::Choice:
      paren(kPrecChoice, [&] {
        print_expr(out, e->args[0], kPrecEq);
        out << " ? ";
        print_expr(out, e->args[1], kPrecChoice);
      });
      return;
    case ExprKind::If:
      paren(kPrecChoice, [&] {
        out << "if ";
        print_expr(out, e->args[0], kPrecChoice);
        out << " then ";
        print_expr(out, e->args[1], kPrecChoice);
        out << " else ";
        print_expr(out, e->args[2], kPrecChoice);
      });
      return;
    case ExprKind::ConApp: {
      if (is_list_expr(e)) {
        out << '[';
        const Expr* cur = e.get();
        bool first = true;
        while (cur->name == ":") {
          if (!first) out << ',';
          first = false;
          print_expr(out, cur->args[0], kPrecChoice);
          cur = cur->args[1].get();
        }
        out << ']';
        return;
      }
      if (e->name == ":") {
        paren(kPrecCons, [&] {
          print_expr(out, e->args[0], kPrecAdd);
          out << " : ";
          print_expr(out, e->args[1], kPrecCons);
        });
        return;
      }
      if (e->args.empty()) {
        out << e->name;
        return;
      }
      paren(kPrecApp, [&] {
        out << e->name;
        for (const ExprPtr& a : e->args) {
          out << ' ';
          print_expr(out, a, kPrecAtom);
        }
      });
      return;
    }
    case ExprKind::FunApp: {
      if (e->name == "+") {
        paren(kPrecAdd, [&] {
          print_expr(out, e->args[0], kPrecAdd);
          out << " + ";
          print_expr(out, e->args[1], kPrecApp);
        });
        return;
      }
      if (e->name == "==") {
        paren(kPrecEq, [&] {
          print_expr(out, e->args[0], kPrecCons);
          out << " == ";
          print_expr(out, e->args[1], kPrecCons);
        });
        return;
      }
      if (e->args.empty()) {
        out << e->name;
        return;
      }
      paren(kPrecApp, [&] {
        out << e->name;
        for (const ExprPtr& a : e->args) {
          out << ' ';
          print_expr(out, a, kPrecAtom);
        }
      });
      return;
    }
  }
}

void print_pattern(std::ostream& out, const Pattern& p, bool atom) {
  if (p.is_var) {
    out << p.name;
    return;
  }
  if (p.name == ":") {
    out << '(';
    print_pattern(out, p.args[0], true);
    out << ':';
    print_pattern(out, p.args[1], false);
    out << ')';
    return;
  }
  if (p.args.empty()) {
    out << p.name;
    return;
  }
  if (atom) out << '(';
  out << p.name;
  for (const Pattern& a : p.args) {
    out << ' ';
    print_pattern(out, a, true);
  }
  if (atom) out << ')';
}

}  // namespace

std::string pretty(const ExprPtr& e) {
  std::ostringstream out;
  print_expr(out, e, kPrecChoice);
  return out.str();
}

std::string pretty(const Pattern& p) {
  std::ostringstream out;
  print_pattern(out, p, true);
  return out.str();
}

std::string pretty(const Program& p) {
  std::ostringstream out;
  for (const DataDecl& d : p.data_decls) {
    if (d.builtin) continue;
    out << "data " << d.name << " =";
    for (size_t i = 0; i < d.constructors.size(); ++i) {
      if (i) out << " |";
      out << ' ' << d.constructors[i].name;
      for (const std::string& t : d.constructors[i].arg_types) out << ' ' << t;
    }
    out << '\n';
  }
  for (const FuncDef& f : p.func_defs) {
    for (const Rule& r : f.rules) {
      out << f.name;
      for (const Pattern& pat : r.patterns) {
        out << ' ';
        print_pattern(out, pat, true);
      }
      out << " = " << pretty(r.body) << '\n';
    }
  }
  return out.str();
}

}  // namespace setsynth
