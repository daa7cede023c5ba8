#pragma once

#include <vector>

#include "setsynth/ast.hpp"

namespace setsynth {

// Rewrites every function into the standard form assumed by the synthesizer:
// either a single rule with all-variable patterns, or exactly one rule per
// constructor of a single data type, matching one fixed argument position.
// Overlapping rules are merged with right-associated choice in textual order;
// missing constructors get a `failed` body. Rejects non-linear left-hand
// sides, nested patterns, and matches on more than one position.
Program uniformize(const Program& p);

// Total check of the uniform-form invariants; empty result means all hold.
std::vector<Diagnostic> validate_uniform(const Program& p);

}  // namespace setsynth
