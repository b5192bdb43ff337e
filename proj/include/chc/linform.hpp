#pragma once

#include "chc/ast.hpp"

namespace chc {

// Normal form of an integer constraint: sum(coeff_i * var_i) + k  op  0 with
// op in {Eq, Ne, Le}. Strict < is absorbed as <= with k+1; >,>= are flipped.
// For Eq/Ne the sign is canonical (first nonzero coefficient positive,
// ordered by variable name).
struct LinForm {
    std::map<std::string, long long> coeffs;  // zero entries removed
    long long constant = 0;

    LinForm& add(const LinForm& o, long long factor = 1);
    bool is_constant() const { return coeffs.empty(); }
    bool operator==(const LinForm& o) const = default;
    bool operator<(const LinForm& o) const;
};

LinForm lin_of_expr(const ExprPtr& e);  // throws on nonlinear input
ExprPtr expr_of_lin(const LinForm& f);  // canonical expression for printing

enum class NormOp { Eq, Ne, Le };

// Normal form of any constraint. Boolean constraints are encoded over 0/1
// pseudo-variables: var names prefixed as-is, constants 0/1.
struct NormConstraint {
    bool boolean = false;
    NormOp op = NormOp::Eq;
    LinForm form;  // integer case

    // boolean case: canonical ordered operands (name or "#t"/"#f")
    std::string b1, b2;

    bool operator==(const NormConstraint& o) const = default;
    bool operator<(const NormConstraint& o) const;
};

NormConstraint normalize(const Constraint& c);

// true when the normalized constraint holds for every assignment
bool norm_trivially_true(const NormConstraint& n);
// true when it holds for no assignment
bool norm_trivially_false(const NormConstraint& n);

std::string norm_to_string(const NormConstraint& n);

}  // namespace chc
