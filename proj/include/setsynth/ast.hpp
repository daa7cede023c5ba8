#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "setsynth/source.hpp"

namespace setsynth {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind { Var, Lit, ConApp, FunApp, Choice, Failed, If };

struct Expr {
  ExprKind kind;
  SourcePos pos;
  std::string name;            // Var / ConApp / FunApp
  std::int64_t lit = 0;        // Lit
  std::vector<ExprPtr> args;   // ConApp/FunApp args; Choice [l,r]; If [c,t,e]

  static ExprPtr var(std::string n, SourcePos p = {});
  static ExprPtr literal(std::int64_t v, SourcePos p = {});
  static ExprPtr con(std::string n, std::vector<ExprPtr> as = {}, SourcePos p = {});
  static ExprPtr app(std::string n, std::vector<ExprPtr> as = {}, SourcePos p = {});
  static ExprPtr choice(ExprPtr l, ExprPtr r, SourcePos p = {});
  static ExprPtr failed(SourcePos p = {});
  static ExprPtr if_then_else(ExprPtr c, ExprPtr t, ExprPtr e, SourcePos p = {});
};

struct Pattern {
  SourcePos pos;
  bool is_var = true;
  std::string name;             // variable name, or constructor tag
  std::vector<Pattern> args;    // constructor arguments (empty for variables)

  static Pattern variable(std::string n, SourcePos p = {}) {
    return Pattern{p, true, std::move(n), {}};
  }
  static Pattern construct(std::string tag, std::vector<Pattern> as = {},
                           SourcePos p = {}) {
    return Pattern{p, false, std::move(tag), std::move(as)};
  }
};

struct Rule {
  SourcePos pos;
  std::vector<Pattern> patterns;
  ExprPtr body;
};

struct FuncDef {
  SourcePos pos;
  std::string name;
  int arity = 0;
  std::vector<Rule> rules;
};

struct ConDecl {
  std::string name;
  std::vector<std::string> arg_types;  // kept verbatim for printing only
  int arity() const { return static_cast<int>(arg_types.size()); }
};

struct DataDecl {
  SourcePos pos;
  std::string name;
  std::vector<ConDecl> constructors;
  bool builtin = false;
};

struct Program {
  std::vector<DataDecl> data_decls;
  std::vector<FuncDef> func_defs;

  const DataDecl* find_data(const std::string& type_name) const;
  const FuncDef* find_function(const std::string& name) const;
  // Returns the declaring data type and arity of a constructor, or nullptr.
  const DataDecl* find_constructor(const std::string& tag, int* arity = nullptr) const;
};

// The ambient declarations every program starts with: Bool (for == and
// if-then-else) and the list type behind [..] / (:) syntax.
std::vector<DataDecl> prelude_decls();
Program program_with_prelude();

// "+" and "==" are primitive binary functions on integers.
bool is_builtin_function(const std::string& name);

// Callee classification used by both evaluators and the synthesizer.
// A name `gS` where `g` is a defined function denotes the set function of g
// unless the program defines `gS` itself. `gP` is only honored when
// `allow_plural` is set (entry-expression scope).
struct Callee {
  enum class Kind { Function, Builtin, SetFunction, PluralFunction };
  Kind kind;
  const FuncDef* def = nullptr;  // target for SetFunction/PluralFunction
  int arity = 0;
};
std::optional<Callee> resolve_callee(const Program& p, const std::string& name,
                                     bool allow_plural = false);

// Structural equality, positions ignored.
bool ast_equal(const ExprPtr& a, const ExprPtr& b);
bool ast_equal(const Pattern& a, const Pattern& b);
bool ast_equal(const Program& a, const Program& b);

// Simultaneous variable renaming / substitution over rule bodies. Expressions
// have no binders, so both are capture-free.
ExprPtr rename_vars(const ExprPtr& e,
                    const std::vector<std::pair<std::string, std::string>>& renaming);
ExprPtr substitute_var(const ExprPtr& e, const std::string& var, const ExprPtr& replacement);

}  // namespace setsynth
