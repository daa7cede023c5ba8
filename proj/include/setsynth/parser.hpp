#pragma once

#include <string_view>

#include "setsynth/ast.hpp"

namespace setsynth {

// Parses a whole MiniFLP module: `data` declarations and one rule per line,
// `--` comments. Injects the prelude declarations (Bool, List) and resolves
// every name; throws CompileError with line/column on the first problem.
Program parse_program(std::string_view text);

// Parses a closed entry expression against an already parsed program.
// In entry scope the synthesized names fS and fP are in scope in addition to
// the program's own functions.
ExprPtr parse_entry_expr(std::string_view text, const Program& program);

}  // namespace setsynth
