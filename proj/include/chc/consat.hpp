#pragma once

#include "chc/ast.hpp"
#include "chc/linform.hpp"

namespace chc {

enum class SatVerdict { Sat, Unsat, Unknown };

// Conservative satisfiability of a constraint conjunction over the integers
// and booleans. Unsat answers are always genuine (equality propagation,
// ground evaluation, difference-bound closure); Sat requires a witness found
// in a small search box; everything else is Unknown.
SatVerdict constraint_sat(const std::vector<Constraint>& cs);
SatVerdict constraint_sat(const std::vector<const Constraint*>& cs);

}  // namespace chc
