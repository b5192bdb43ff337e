#pragma once

#include "chc/ast.hpp"

namespace chc {

// Renders the program as an SMT-LIB 2.6 script in the HORN fragment:
// one declare-fun per predicate, one universally quantified assert per
// clause, and a check-sat/get-model trailer. Programs that still mention
// lists declare an algebraic list datatype. Output is deterministic.
std::string emit_smtlib(const Program& p);

}  // namespace chc
