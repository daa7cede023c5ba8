#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "setsynth/ast.hpp"
#include "setsynth/runtime.hpp"

namespace setsynth::ir {

// Expression language of the synthesized code. Plural functions evaluate to
// search trees; supply and level arguments are threaded explicitly.
enum class IrKind {
  Var,          // environment slot
  ValInt,       // Val n
  ValCon,       // Val (C a1 ... an), arguments are trees
  Fail,         // Fail level                     args: [level]
  Choice,       // Choice id level l r            args: [id, level, l, r]
  CaseSt,       // match a tree against ND constructors (applyST dispatch)
  Call,         // plural-function call            args: [supply, level, trees...]
  SupplyPath,   // the supply parameter extended by an L/R path
  UniqueId,     // identifier of a supply          args: [supply]
  FreshId,      // counter-minted identifier (no supply threading)
  IntConst,     // integer (levels)
  IntAdd,       // args: [a, b]
  CollectVals,  // level-aware value collection    args: [level, tree]
  PrimAdd,      // strict integer addition over trees      args: [a, b]
  PrimEq,       // strict integer equality over trees      args: [a, b]
};

struct IrExpr;
using IrExprPtr = std::shared_ptr<const IrExpr>;

struct IrBranch {
  std::string tag;
  std::vector<std::string> binders;
  int first_slot = 0;
  IrExprPtr body;
};

struct IrExpr {
  IrKind kind;
  int slot = 0;             // Var
  std::string name;         // ValCon tag / Call target / SupplyPath ("LRL...")
  std::int64_t num = 0;     // ValInt / IntConst
  std::vector<IrExprPtr> args;
  std::vector<IrBranch> branches;  // CaseSt; args[0] is the scrutinee

  static IrExprPtr var(int slot);
  static IrExprPtr val_int(std::int64_t v);
  static IrExprPtr val_con(std::string tag, std::vector<IrExprPtr> as);
  static IrExprPtr fail(IrExprPtr level);
  static IrExprPtr choice(IrExprPtr id, IrExprPtr level, IrExprPtr l, IrExprPtr r);
  static IrExprPtr case_st(IrExprPtr scrutinee, std::vector<IrBranch> branches);
  static IrExprPtr call(std::string fn, std::vector<IrExprPtr> as);
  static IrExprPtr supply_path(std::string path);
  static IrExprPtr unique_id(IrExprPtr supply);
  static IrExprPtr fresh_id();
  static IrExprPtr int_const(std::int64_t v);
  static IrExprPtr int_add(IrExprPtr a, IrExprPtr b);
  static IrExprPtr collect_vals(IrExprPtr level, IrExprPtr tree);
  static IrExprPtr prim(bool add, IrExprPtr a, IrExprPtr b);
};

struct IrFunction {
  std::string name;         // fP or fSP
  std::string source;       // the source function it was derived from
  bool is_set_plural = false;
  int tree_arity = 0;
  std::vector<std::string> params;  // supply, level, then tree parameters
  IrExprPtr body;
  bool right_linear = true;
};

struct NdConDecl {
  std::string tag;
  int arity = 0;
};

// Mirror of a source data type where every constructor argument is a search
// tree. Constructors keep their tags; base types map to themselves.
struct NdDataDecl {
  std::string name;
  std::vector<NdConDecl> constructors;
};

// Per-type normal-form operation: children normalized left to right, child
// choices hoisted above the rebuilt constructor, child failures aborting.
struct NfOp {
  std::string type_name;
  NdDataDecl decl;
  rt::Tree normalize(const rt::Hnf& h) const;
};

// Per-type conversion bundle between source-level data and search trees.
// The tree-side halves live with the execution machinery; from_val_st is the
// pure direction usable here.
struct ConvertOps {
  std::string type_name;
  NdDataDecl decl;
  Value from_val_st(const rt::Tree& fully_evaluated) const;
};

struct SetFunDef {
  std::string name;    // fS
  std::string target;  // f
  std::string plural;  // fP
  int arity = 0;
};

struct IrBundle {
  Program source;   // original program: outer evaluation and suspensions
  Program uniform;  // standard-form program the transformation consumed
  bool supply_threading = true;
  std::vector<NdDataDecl> nd_types;
  std::vector<NfOp> nf_ops;
  std::vector<ConvertOps> convert_ops;
  std::vector<IrFunction> functions;
  std::vector<SetFunDef> set_functions;

  const IrFunction* find_function(const std::string& name) const;
  const SetFunDef* find_set_function(const std::string& wrapper_name) const;
};

// Stable textual rendering for inspection and golden tests.
std::string dump_function(const IrFunction& f);
std::string dump_bundle(const IrBundle& b);

}  // namespace setsynth::ir
