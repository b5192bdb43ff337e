#pragma once

#include "chc/ast.hpp"

namespace chc {

// Clause variant check: a bijective variable renaming making the two clauses
// equal, with identical predicate names, bodies compared as multisets and
// constraints compared by normal form.
bool clause_variant(const Clause& a, const Clause& b);

// Program equivalence up to predicate renaming, per-clause variable renaming,
// body order and constraint normalization. Declarations are not compared;
// clause multisets must correspond. On success, reports the predicate map.
bool program_variant_equal(const Program& a, const Program& b,
                           std::map<std::string, std::string>* pred_map = nullptr);

// Human-oriented report of why two programs fail to correspond (best-effort).
std::string variant_diff_report(const Program& a, const Program& b);

}  // namespace chc
