#pragma once

#include "chc/ast.hpp"

#include <stdexcept>

namespace chc {

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(int line, int col, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ", col " +
                             std::to_string(col) + ": " + msg),
          line(line),
          col(col) {}
};

struct UndeclaredPredicate : ParseError {
    UndeclaredPredicate(int line, int col, const std::string& pred)
        : ParseError(line, col, "undeclared predicate: " + pred) {}
};

struct ArityMismatch : ParseError {
    ArityMismatch(int line, int col, const std::string& pred)
        : ParseError(line, col, "arity mismatch for predicate: " + pred) {}
};

struct SortError : ParseError {
    SortError(int line, int col, const std::string& msg)
        : ParseError(line, col, "sort error: " + msg) {}
};

// Parses the clause syntax: `:- pred name(int,list(int)).` declarations,
// optional `:- mode name(in,out).` annotations, and clauses
// `head :- constraints, atoms.` List equations such as `T=[Y|T1]` are
// resolved by unification at parse time.
Program parse_program(const std::string& text);

std::string print_program(const Program& p);

bool program_equal(const Program& a, const Program& b);  // structural, id-blind

// --- models in Prolog-style solver output format ---

struct ModelFormula {
    enum class Kind { True, False, Cmp, And, Or, Not };
    Kind kind = Kind::True;
    Constraint cmp;  // Kind::Cmp
    std::vector<ModelFormula> kids;
};

struct ModelEntry {
    std::vector<std::string> params;
    ModelFormula formula;
};

struct Model {
    std::map<std::string, ModelEntry> entries;
};

Model parse_model(const std::string& text);
std::string model_formula_to_string(const ModelFormula& f);

}  // namespace chc
