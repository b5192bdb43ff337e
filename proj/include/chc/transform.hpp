#pragma once

#include "chc/ast.hpp"
#include "chc/subst.hpp"

namespace chc {

struct TransformError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A definition available for folding: the clause `name(args) :- body`
// introduced by a define or diff step. The clause is kept as a snapshot so
// folding still works after the program copy has been unfolded away.
struct Definition {
    std::string name;
    Clause def_clause;
    int clause_id = -1;      // id of the program copy added at define time
    int introduced_at = -1;  // index into the trace
};

// One replayable step. Steps are serialized one per line:
//   define <name>(<vars>) :- <body>.
//   unfold <clause-id> <atom-index>
//   fold <clause-id> <def-name>
//   diff <clause-id> <def-name> [<def-name>] [pairs c.i:j,...] [order i,j,../..]
//   subst <clause-id> [<var> ...]
//   tidy <clause-id>                  (drop trivially true constraints)
//   merge <clause-id> <atom-i> <atom-j>
//   split <clause-id> <constraint-index>
//   drop <clause-id> {c|a}<index>
//   weaken <clause-id> <def-name> [fresh <pos,...>]
//   inst <clause-id> <var> <int|true|false>
//   prune <clause-id>
struct Step {
    enum class Kind { Define, Unfold, Fold, Diff, Subst, Tidy, Merge, Split, Drop, Weaken, Inst, Prune };
    Kind kind;
    std::string text;  // serialized form

    std::string name;                      // define / fold / weaken
    std::optional<Atom> def_head;          // define
    std::vector<BodyItem> def_body;        // define
    int clause_id = -1;
    int atom_index = -1;                   // unfold
    std::vector<std::string> def_names;    // diff
    std::vector<std::vector<int>> orders;  // diff: per-component arg orders (1-based)
    std::vector<std::array<int, 3>> pairs; // diff: (copy, def atom, target atom), 1-based
    std::vector<std::string> subst_vars;   // subst
    int atom_i = -1, atom_j = -1;          // merge
    int item_index = -1;                   // split / drop
    bool drop_atom = false;                // drop a<k> vs c<k>
    std::vector<int> fresh_positions;      // weaken
    std::string inst_var, inst_value;      // inst
};

// Parses one script line (comments and blank lines yield nullopt).
// `define` bodies are parsed against the given program's declarations.
std::optional<Step> parse_step(const std::string& line, const Program& p);
std::vector<Step> parse_script(const std::string& text, const Program& p);

struct FoldResult {
    bool applied = false;
    int new_clause_id = -1;
};

// A transformation session: program state, the definition database, a
// fresh-name counter and the realized trace.
struct Session {
    Program prog;
    std::vector<Definition> defs;
    std::vector<std::string> trace;
    int rename_counter = 0;
    int next_new = 1;
    int next_diff = 1;

    explicit Session(Program p) : prog(std::move(p)) {}

    const Definition* find_def(const std::string& name) const;
    const Clause& clause(int id) const;

    // --- core rules ---
    // Introduces `name(head_args) :- body`; head args default to the base
    // variables of the body in order of first occurrence.
    Definition& define(const std::string& name, std::optional<Atom> head,
                       std::vector<BodyItem> body);
    std::vector<int> unfold(int clause_id, int atom_index);
    FoldResult fold(int clause_id, const std::string& def_name);

    // --- auxiliary steps used to reproduce published derivations ---
    void subst(int clause_id, const std::vector<std::string>& vars);
    void tidy(int clause_id);
    void merge(int clause_id, int atom_i, int atom_j);
    std::vector<int> split(int clause_id, int constraint_index);
    void drop(int clause_id, bool is_atom, int index);
    int weaken(int clause_id, const std::string& def_name,
               const std::vector<int>& fresh_positions);
    // adds a copy of the clause with one variable instantiated
    int instance(int clause_id, const std::string& var, const std::string& value);
    void prune(int clause_id);

    // difference-predicate introduction lives in diffpred.cpp
    struct DiffOutcome {
        std::vector<std::string> diff_names;
        std::vector<int> def_clause_ids;
        int folded_clause_id = -1;
    };
    DiffOutcome diff(int clause_id, const std::vector<std::string>& def_names,
                     const std::vector<std::array<int, 3>>& pairs,
                     const std::vector<std::vector<int>>& orders);

    void apply(const Step& s);

    // helpers shared by the rule implementations
    std::string fresh_new_name();
    std::string fresh_diff_name();
    Clause rename_def_apart(const Definition& d, const std::set<std::string>& avoid,
                            Substitution* renaming = nullptr);
    void record(const std::string& line) { trace.push_back(line); }
    bool clause_is_tautology(const Clause& c) const;
    bool clause_is_duplicate(const Clause& c) const;
};

// Applies a script to a program and returns the resulting session.
// Throws TransformError with the failing step index on error.
struct StepFailed : TransformError {
    int index;
    StepFailed(int index, const std::string& why)
        : TransformError("step " + std::to_string(index + 1) + ": " + why), index(index) {}
};

Session replay(Program p, const std::vector<Step>& script);

// Clause cleanup applied after every rule: duplicate constraints (by normal
// form) are removed, keeping first occurrences.
void dedup_constraints(Clause& c);

// Modes for an introduced predicate: arguments whose variable appears at an
// Out position of some body atom are Out, the rest In.
std::vector<Mode> introduced_modes(const std::vector<TermPtr>& head_args,
                                   const std::vector<BodyItem>& body, const Program& p);

}  // namespace chc
