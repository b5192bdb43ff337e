#pragma once

#include "chc/ast.hpp"
#include "chc/parser.hpp"

namespace chc {

struct NotADTFree : std::runtime_error {
    NotADTFree() : std::runtime_error("program still mentions lists") {}
};

struct MissingPredicate : std::runtime_error {
    std::string pred;
    explicit MissingPredicate(const std::string& p)
        : std::runtime_error("model has no entry for predicate " + p), pred(p) {}
};

struct BoxTooLarge : std::runtime_error {
    BoxTooLarge() : std::runtime_error("per-clause enumeration exceeded its cap") {}
};

struct Box {
    long long lo = -3, hi = 3;
    unsigned long long cap = 10000000ULL;
};

struct Counterexample {
    int clause_id = -1;
    std::map<std::string, long long> assignment;  // bools encoded 0/1
    std::string to_string(const Program& p) const;
};

struct CheckResult {
    bool valid = true;
    std::optional<Counterexample> cex;
    std::vector<std::string> warnings;
};

// Substitutes the model formula for every predicate occurrence and searches
// the box for an assignment that satisfies a clause body but falsifies its
// head. Requires an ADT-free program. When `missing_is_error` is false,
// predicates without a model entry are read as `true` and a warning is
// recorded.
CheckResult check_model(const Program& p, const Model& m, const Box& box,
                        bool missing_is_error = true);

struct FunctionalityResult {
    bool functional = true;
    std::map<std::string, long long> inputs;
    std::vector<long long> out1, out2;
};

FunctionalityResult check_functionality(const ModelEntry& entry,
                                        const std::vector<Sort>& arg_sorts,
                                        const std::vector<Mode>& modes, const Box& box);

// Renders the implication "forall vars. body -> model conclusion" for a
// definition clause, solving equality conjuncts for the predicate's output
// argument where possible.
std::string extract_lemma(const Clause& def_clause, const PredDecl& decl,
                          const ModelEntry& entry);

}  // namespace chc
