#pragma once

#include <string>
#include <vector>

#include "setsynth/ast.hpp"
#include "setsynth/ir.hpp"

namespace setsynth::synth {

struct Options {
  // When off, choices take counter-minted identifiers instead of threading
  // an identifier supply; sound only for right-linear programs.
  bool supply_threading = true;
};

// One ND mirror per source data declaration.
std::vector<ir::NdDataDecl> gen_nd_types(const Program& p);
ir::NdDataDecl gen_nd_type(const DataDecl& d);

// Per-type normal-form and conversion operations.
ir::NfOp gen_nf(const ir::NdDataDecl& d);
ir::ConvertOps gen_convert(const DataDecl& d);

// Translates one rule body. `params` are the rule's variables in parameter
// order; the returned expression expects the standard frame
// [supply, level, params...].
ir::IrExprPtr pluralize_expr(const Program& uniform, const ExprPtr& e,
                             const std::vector<std::string>& params,
                             const Options& opts = {});

// Translates a whole uniform function definition: a single-variable rule
// maps to its translated body, a constructor-matching definition dispatches
// through a tree case with one branch per constructor.
ir::IrFunction pluralize_function(const Program& uniform, const FuncDef& f,
                                  const Options& opts = {});

// The plural form of a set function used inside another set function: runs
// the plural function one level deeper and collects the values.
ir::IrFunction synthesize_plural_set_function(const Program& uniform, const FuncDef& f,
                                              const Options& opts = {});

// Adds the set-function wrapper for `fname` to the bundle along with plural
// definitions for everything reachable from its body.
void synthesize_set_function(ir::IrBundle& bundle, const std::string& fname,
                             const Options& opts = {});

// Self-contained bundle: ND types, per-type operations, plural definitions
// for the targets' call closures, set-function wrappers, and both the
// original and the standard-form program.
ir::IrBundle emit_program(const Program& source, const std::vector<std::string>& targets,
                          const Options& opts = {});

// A bound variable used more than once in some reachable rule body makes the
// closure non-linear; supply threading is required for call-time choice then.
bool closure_right_linear(const Program& uniform, const std::string& fname);

}  // namespace setsynth::synth
