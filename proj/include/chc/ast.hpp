#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace chc {

// ---------------------------------------------------------------------------
// Sorts
// ---------------------------------------------------------------------------

enum class Sort { Int, Bool, List };

const char* sort_name(Sort s);

enum class Mode { In, Out };

// ---------------------------------------------------------------------------
// Terms: variables, integer/boolean constants, and integer lists
// ---------------------------------------------------------------------------

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    enum class Kind { Var, IntConst, BoolConst, Nil, Cons };

    Kind kind;
    std::string name;    // Var
    Sort var_sort = Sort::Int;
    long long ival = 0;  // IntConst
    bool bval = false;   // BoolConst
    TermPtr head, tail;  // Cons

    static TermPtr var(std::string n, Sort s);
    static TermPtr int_const(long long v);
    static TermPtr bool_const(bool v);
    static TermPtr nil();
    static TermPtr cons(TermPtr h, TermPtr t);

    Sort sort() const;
    bool is_var() const { return kind == Kind::Var; }
};

bool term_equal(const TermPtr& a, const TermPtr& b);
bool term_contains_var(const TermPtr& t, const std::string& name);
bool term_has_constructor(const TermPtr& t);
void term_vars(const TermPtr& t, std::vector<std::pair<std::string, Sort>>& out);
std::string term_to_string(const TermPtr& t);

// ---------------------------------------------------------------------------
// Integer expressions (kept as written, for faithful printing)
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Const, Var, Add, Sub, Neg, Mul };

    Kind kind;
    long long value = 0;   // Const; Mul coefficient
    std::string var;       // Var
    ExprPtr lhs, rhs;      // Add/Sub; Mul uses lhs only

    static ExprPtr constant(long long v);
    static ExprPtr variable(std::string name);
    static ExprPtr add(ExprPtr a, ExprPtr b);
    static ExprPtr sub(ExprPtr a, ExprPtr b);
    static ExprPtr neg(ExprPtr a);
    static ExprPtr mul(long long coeff, ExprPtr a);
};

void expr_vars(const ExprPtr& e, std::vector<std::string>& out);
std::string expr_to_string(const ExprPtr& e);

// ---------------------------------------------------------------------------
// Constraints: linear integer comparisons, or (dis)equality over booleans
// ---------------------------------------------------------------------------

enum class CmpOp { Eq, Ne, Le, Lt, Ge, Gt };

const char* cmp_op_text(CmpOp op);  // "=", "=\\=", "=<", "<", ">=", ">"

struct Constraint {
    bool boolean = false;
    CmpOp op = CmpOp::Eq;
    // integer comparison
    ExprPtr lhs, rhs;
    // boolean (dis)equality; terms are Bool-sorted vars or constants
    TermPtr blhs, brhs;

    static Constraint int_cmp(CmpOp op, ExprPtr l, ExprPtr r);
    static Constraint bool_cmp(CmpOp op, TermPtr l, TermPtr r);
};

void constraint_vars(const Constraint& c, std::vector<std::pair<std::string, Sort>>& out);
std::string constraint_to_string(const Constraint& c);

// ---------------------------------------------------------------------------
// Atoms and clauses
// ---------------------------------------------------------------------------

struct Atom {
    std::string pred;
    std::vector<TermPtr> args;
};

bool atom_equal(const Atom& a, const Atom& b);
std::string atom_to_string(const Atom& a);

// A body item is either a constraint or an atom; source order is preserved.
using BodyItem = std::variant<Constraint, Atom>;

struct Clause {
    int id = -1;
    std::optional<Atom> head;  // nullopt encodes the goal head `false`
    std::vector<BodyItem> body;

    bool is_goal() const { return !head.has_value(); }

    std::vector<const Constraint*> constraints() const;
    std::vector<const Atom*> atoms() const;
    // indices into `body` of the k-th atom / constraint (1-based k)
    int atom_pos(int k) const;
    int constraint_pos(int k) const;

    // all free variables with their sorts, in order of first occurrence
    // (head first, then body)
    std::vector<std::pair<std::string, Sort>> vars() const;
    std::set<std::string> var_names() const;
    bool has_list_var() const;
};

std::string clause_to_string(const Clause& c);

// ---------------------------------------------------------------------------
// Predicate declarations and programs
// ---------------------------------------------------------------------------

struct PredDecl {
    std::string name;
    std::vector<Sort> arg_sorts;
    std::vector<Mode> modes;       // same length as arg_sorts
    bool modes_declared = false;   // true if an explicit :- mode line was given
};

struct Program {
    std::vector<PredDecl> decls;
    std::vector<Clause> clauses;
    int next_clause_id = 1;

    const PredDecl* find_decl(const std::string& name) const;
    PredDecl* find_decl(const std::string& name);
    void add_decl(PredDecl d);

    Clause* find_clause(int id);
    const Clause* find_clause(int id) const;
    // position in `clauses`, or -1
    int clause_index(int id) const;

    int add_clause(Clause c);                 // assigns a fresh id
    void replace_clause(int id, std::vector<Clause> subst);  // keeps position
    void remove_clause(int id);

    std::vector<const Clause*> defining_clauses(const std::string& pred) const;
    bool has_list_syntax() const;  // any list var or Nil/Cons anywhere
};

std::string program_to_string(const Program& p);

// sorted/mode helper: default modes are last argument Out, the rest In
std::vector<Mode> default_modes(size_t arity);

}  // namespace chc
