#pragma once

#include "chc/transform.hpp"

namespace chc {

enum class ElimStatus { Success, BudgetExhausted, Stuck };

struct ElimResult {
    ElimStatus status = ElimStatus::Success;
    Program program;
    std::vector<std::string> trace;
    int blocking_clause = -1;
    std::string message;
};

// Selects the atom to unfold: never when some definition's body is embedded
// in the clause (the fold/diff path handles those); otherwise the leftmost
// atom whose list argument contains a constructor, then the leftmost atom
// consuming an In-mode list variable that no other atom produces.
// Returns the 1-based atom index, or 0 when nothing is eligible.
int unfold_selection(const Clause& c, const Program& p,
                     const std::vector<const Clause*>& def_clauses,
                     int self_def_clause_id = -1);

// Drives define/unfold/fold/diff until the clause set is list-free or the
// budget runs out. With a hint script the steps are applied as given;
// otherwise the automatic policy runs. Ends with a cleanup pass that prunes
// clauses of predicates unreachable from the goals.
ElimResult eliminate(Program p, int budget = 500,
                     const std::vector<Step>* hints = nullptr);

// Predicates reachable from the goal clauses through body atoms.
std::set<std::string> reachable_preds(const Program& p);

}  // namespace chc
