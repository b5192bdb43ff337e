#pragma once

#include "chc/ast.hpp"

#include <functional>
#include <stdexcept>

namespace chc {

// Finite bounds for bottom-up evaluation: integers in [int_lo, int_hi],
// lists up to max_list_len elements.
struct Universe {
    long long int_lo = 0;
    long long int_hi = 2;
    int max_list_len = 3;
    unsigned long long work_cap = 100000000ULL;  // abort beyond this many steps
};

struct UniverseTooLarge : std::runtime_error {
    UniverseTooLarge() : std::runtime_error("bounded evaluation exceeded its work cap") {}
};

struct UniverseTooSmall : std::runtime_error {
    explicit UniverseTooSmall(long long c)
        : std::runtime_error("clause constant " + std::to_string(c) +
                             " lies outside the universe's integer range") {}
};

// Ground values are encoded as integers: Int as itself, Bool as 0/1,
// List as an id into the interning table (id 0 is the empty list).
using Tuple = std::vector<long long>;

struct ListTable {
    // node i (i >= 1) is (head value, tail id); id 0 is nil
    std::vector<std::pair<long long, int>> nodes{{0, -1}};
    std::vector<int> lengths{0};
    std::map<std::pair<long long, int>, int> index;

    int cons(long long head, int tail);  // -1 if the result would be too long
    int max_len = 3;
    std::string to_string(int id) const;
};

struct Extension {
    std::map<std::string, std::set<Tuple>> rels;
    ListTable lists;

    bool holds(const std::string& pred, const Tuple& t) const {
        auto it = rels.find(pred);
        return it != rels.end() && it->second.count(t) > 0;
    }
    size_t total_tuples() const;
};

// One ground clause instance: the clause and the values of its variables.
struct GroundStep {
    int clause_id = -1;
    std::map<std::string, long long> env;
};

struct DerivationNode {
    GroundStep step;
    Atom ground_head;  // textual form with values substituted ("false" if goal)
    bool is_goal = false;
    std::vector<DerivationNode> children;
};

struct BoundedResult {
    bool false_derived = false;
    std::optional<DerivationNode> witness;
    Extension model;
};

enum class CompareVerdict { Agree, Disagree };

struct CompareResult {
    CompareVerdict verdict;
    BoundedResult left, right;
};

// Least fixpoint of the immediate-consequence operator restricted to the
// universe, by semi-naive iteration. With `strict_constants`, term-level
// integer constants outside the range raise UniverseTooSmall; otherwise such
// atoms simply never match.
Extension least_model(const Program& p, const Universe& u, bool strict_constants = false);

// Naive (re-evaluate everything each round) variant, used as a cross-check.
Extension least_model_naive(const Program& p, const Universe& u);

BoundedResult bounded_sat(const Program& p, const Universe& u);

CompareResult compare_programs(const Program& a, const Program& b, const Universe& u);

std::string witness_to_string(const DerivationNode& n, const Program& p, int indent = 0);

// Re-checks that every ground instance in the witness satisfies its clause.
bool validate_witness(const DerivationNode& n, const Program& p, const Extension& ext);

}  // namespace chc
