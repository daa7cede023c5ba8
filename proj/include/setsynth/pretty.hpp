#pragma once

#include <string>

#include "setsynth/ast.hpp"

namespace setsynth {

// Canonical source rendering; parsing the output yields a structurally equal
// program (prelude declarations are implicit and not printed).
std::string pretty(const Program& p);
std::string pretty(const ExprPtr& e);
std::string pretty(const Pattern& p);

}  // namespace setsynth
