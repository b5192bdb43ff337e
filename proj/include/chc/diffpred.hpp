#pragma once

#include "chc/ast.hpp"
#include "chc/subst.hpp"
#include "chc/transform.hpp"

namespace chc {

// Simultaneous match of one or more renamed definition copies against a
// target clause body.
struct Matching {
    struct Copy {
        Clause renamed;                   // definition copy, renamed apart
        std::vector<int> matched_def;     // def atom indices (1-based)
        std::vector<int> matched_target;  // paired target atom indices (1-based)
        std::vector<Atom> mismatch;       // sigma-applied unmatched def atoms
    };
    Substitution sigma;  // binds definition-copy variables only
    std::vector<Copy> copies;
    std::vector<int> target_mismatch;  // target atom indices (1-based)
};

// True when every body atom of the definition has a variant among the
// target's body atoms.
bool find_embedding(const Clause& target, const Clause& def_clause);

// Computes the matching; `forced_pairs` entries are (copy, def atom, target
// atom), all 1-based. Without hints the pairs are chosen greedily in
// (copy, def atom position, target atom position) order; an output argument
// is bound only when all input arguments of the pair already agree, and
// input bindings collected during a failed pairing attempt are kept.
std::optional<Matching> match_definitions(const Clause& target,
                                          const std::vector<Clause>& copies,
                                          const Program& prog,
                                          const std::vector<std::array<int, 3>>& forced_pairs);

}  // namespace chc
