#pragma once

#include "chc/ast.hpp"

#include <functional>

namespace chc {

// Sort-preserving map from variable names to terms. Int/Bool variables may
// only be bound to same-sorted terms; applying to an expression requires the
// image to be a variable or an integer constant.
struct Substitution {
    std::map<std::string, TermPtr> map;

    bool empty() const { return map.empty(); }
    bool binds(const std::string& v) const { return map.count(v) > 0; }
    TermPtr lookup(const std::string& v) const;
    void bind(const std::string& v, TermPtr t) { map[v] = std::move(t); }

    TermPtr apply(const TermPtr& t) const;
    ExprPtr apply(const ExprPtr& e) const;
    Constraint apply(const Constraint& c) const;
    Atom apply(const Atom& a) const;
    Clause apply(const Clause& c) const;
    BodyItem apply(const BodyItem& it) const;

    // this then other, flattened into a single idempotent map
    Substitution compose(const Substitution& other) const;
    // defined only for bijective variable renamings
    Substitution inverse() const;
};

// Result of unification.
enum class UnifyStatus { Ok, Clash, OccursCheck, SortMismatch };

struct UnifyResult {
    UnifyStatus status = UnifyStatus::Ok;
    Substitution mgu;
    bool ok() const { return status == UnifyStatus::Ok; }
};

UnifyResult unify(const TermPtr& a, const TermPtr& b);
UnifyResult unify_args(const std::vector<TermPtr>& as, const std::vector<TermPtr>& bs);

// Renames every variable of `clause` to a name not in `forbidden`, using
// base name + "_k" with the session counter supplied by the caller.
std::pair<Clause, Substitution> rename_apart(const Clause& clause,
                                             const std::set<std::string>& forbidden,
                                             int& counter);

// Bijective renaming making the two atom lists elementwise equal, if any.
std::optional<Substitution> is_variant(const std::vector<Atom>& a,
                                       const std::vector<Atom>& b);
std::optional<Substitution> atom_variant(const Atom& a, const Atom& b);

// List/base variable split of a clause's free variables.
struct VarPartition {
    std::set<std::string> adt_vars;
    std::set<std::string> base_vars;
};
VarPartition partition_vars(const Clause& c);

}  // namespace chc
