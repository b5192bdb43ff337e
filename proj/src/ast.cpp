#include "chc/ast.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace chc {

const char* sort_name(Sort s) {
    switch (s) {
        case Sort::Int: return "int";
        case Sort::Bool: return "bool";
        case Sort::List: return "list(int)";
    }
    return "?";
}

// --- terms ---

TermPtr Term::var(std::string n, Sort s) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::Var;
    t->name = std::move(n);
    t->var_sort = s;
    return t;
}

TermPtr Term::int_const(long long v) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::IntConst;
    t->ival = v;
    return t;
}

TermPtr Term::bool_const(bool v) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::BoolConst;
    t->bval = v;
    return t;
}

TermPtr Term::nil() {
    static TermPtr n = [] {
        auto t = std::make_shared<Term>();
        t->kind = Kind::Nil;
        return t;
    }();
    return n;
}

TermPtr Term::cons(TermPtr h, TermPtr t) {
    auto c = std::make_shared<Term>();
    c->kind = Kind::Cons;
    c->head = std::move(h);
    c->tail = std::move(t);
    return c;
}

Sort Term::sort() const {
    switch (kind) {
        case Kind::Var: return var_sort;
        case Kind::IntConst: return Sort::Int;
        case Kind::BoolConst: return Sort::Bool;
        case Kind::Nil:
        case Kind::Cons: return Sort::List;
    }
    return Sort::Int;
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case Term::Kind::Var: return a->name == b->name;
        case Term::Kind::IntConst: return a->ival == b->ival;
        case Term::Kind::BoolConst: return a->bval == b->bval;
        case Term::Kind::Nil: return true;
        case Term::Kind::Cons:
            return term_equal(a->head, b->head) && term_equal(a->tail, b->tail);
    }
    return false;
}

bool term_contains_var(const TermPtr& t, const std::string& name) {
    if (!t) return false;
    switch (t->kind) {
        case Term::Kind::Var: return t->name == name;
        case Term::Kind::Cons:
            return term_contains_var(t->head, name) || term_contains_var(t->tail, name);
        default: return false;
    }
}

bool term_has_constructor(const TermPtr& t) {
    return t && (t->kind == Term::Kind::Nil || t->kind == Term::Kind::Cons);
}

void term_vars(const TermPtr& t, std::vector<std::pair<std::string, Sort>>& out) {
    if (!t) return;
    switch (t->kind) {
        case Term::Kind::Var: out.emplace_back(t->name, t->var_sort); break;
        case Term::Kind::Cons:
            term_vars(t->head, out);
            term_vars(t->tail, out);
            break;
        default: break;
    }
}

std::string term_to_string(const TermPtr& t) {
    if (!t) return "?";
    switch (t->kind) {
        case Term::Kind::Var: return t->name;
        case Term::Kind::IntConst: return std::to_string(t->ival);
        case Term::Kind::BoolConst: return t->bval ? "true" : "false";
        case Term::Kind::Nil: return "[]";
        case Term::Kind::Cons: {
            // list syntax: [a,b|T] / [a,b]
            std::string s = "[";
            const Term* cur = t.get();
            bool first = true;
            while (cur->kind == Term::Kind::Cons) {
                if (!first) s += ",";
                s += term_to_string(cur->head);
                first = false;
                cur = cur->tail.get();
            }
            if (cur->kind == Term::Kind::Nil) return s + "]";
            return s + "|" + cur->name + "]";
        }
    }
    return "?";
}

// --- expressions ---

ExprPtr Expr::constant(long long v) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Const;
    e->value = v;
    return e;
}

ExprPtr Expr::variable(std::string name) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Var;
    e->var = std::move(name);
    return e;
}

ExprPtr Expr::add(ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Add;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

ExprPtr Expr::sub(ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Sub;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

ExprPtr Expr::neg(ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Neg;
    e->lhs = std::move(a);
    return e;
}

ExprPtr Expr::mul(long long coeff, ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Mul;
    e->value = coeff;
    e->lhs = std::move(a);
    return e;
}

void expr_vars(const ExprPtr& e, std::vector<std::string>& out) {
    if (!e) return;
    switch (e->kind) {
        case Expr::Kind::Const: break;
        case Expr::Kind::Var: out.push_back(e->var); break;
        case Expr::Kind::Neg:
        case Expr::Kind::Mul: expr_vars(e->lhs, out); break;
        case Expr::Kind::Add:
        case Expr::Kind::Sub:
            expr_vars(e->lhs, out);
            expr_vars(e->rhs, out);
            break;
    }
}

static bool expr_atomic(const ExprPtr& e) {
    return e->kind == Expr::Kind::Const || e->kind == Expr::Kind::Var;
}

std::string expr_to_string(const ExprPtr& e) {
    if (!e) return "?";
    switch (e->kind) {
        case Expr::Kind::Const: return std::to_string(e->value);
        case Expr::Kind::Var: return e->var;
        case Expr::Kind::Add:
            return expr_to_string(e->lhs) + "+" + expr_to_string(e->rhs);
        case Expr::Kind::Sub: {
            std::string r = expr_to_string(e->rhs);
            if (!expr_atomic(e->rhs)) r = "(" + r + ")";
            return expr_to_string(e->lhs) + "-" + r;
        }
        case Expr::Kind::Neg: {
            std::string r = expr_to_string(e->lhs);
            if (!expr_atomic(e->lhs)) r = "(" + r + ")";
            return "-" + r;
        }
        case Expr::Kind::Mul: {
            std::string r = expr_to_string(e->lhs);
            if (!expr_atomic(e->lhs)) r = "(" + r + ")";
            return std::to_string(e->value) + "*" + r;
        }
    }
    return "?";
}

// --- constraints ---

const char* cmp_op_text(CmpOp op) {
    switch (op) {
        case CmpOp::Eq: return "=";
        case CmpOp::Ne: return "=\\=";
        case CmpOp::Le: return "=<";
        case CmpOp::Lt: return "<";
        case CmpOp::Ge: return ">=";
        case CmpOp::Gt: return ">";
    }
    return "?";
}

Constraint Constraint::int_cmp(CmpOp op, ExprPtr l, ExprPtr r) {
    Constraint c;
    c.boolean = false;
    c.op = op;
    c.lhs = std::move(l);
    c.rhs = std::move(r);
    return c;
}

Constraint Constraint::bool_cmp(CmpOp op, TermPtr l, TermPtr r) {
    Constraint c;
    c.boolean = true;
    c.op = op;
    c.blhs = std::move(l);
    c.brhs = std::move(r);
    return c;
}

void constraint_vars(const Constraint& c, std::vector<std::pair<std::string, Sort>>& out) {
    if (c.boolean) {
        term_vars(c.blhs, out);
        term_vars(c.brhs, out);
    } else {
        std::vector<std::string> vs;
        expr_vars(c.lhs, vs);
        expr_vars(c.rhs, vs);
        for (auto& v : vs) out.emplace_back(v, Sort::Int);
    }
}

std::string constraint_to_string(const Constraint& c) {
    if (c.boolean)
        return term_to_string(c.blhs) + cmp_op_text(c.op) + term_to_string(c.brhs);
    return expr_to_string(c.lhs) + cmp_op_text(c.op) + expr_to_string(c.rhs);
}

// --- atoms / clauses ---

bool atom_equal(const Atom& a, const Atom& b) {
    if (a.pred != b.pred || a.args.size() != b.args.size()) return false;
    for (size_t i = 0; i < a.args.size(); i++)
        if (!term_equal(a.args[i], b.args[i])) return false;
    return true;
}

std::string atom_to_string(const Atom& a) {
    if (a.args.empty()) return a.pred;
    std::string s = a.pred + "(";
    for (size_t i = 0; i < a.args.size(); i++) {
        if (i) s += ",";
        s += term_to_string(a.args[i]);
    }
    return s + ")";
}

std::vector<const Constraint*> Clause::constraints() const {
    std::vector<const Constraint*> out;
    for (auto& it : body)
        if (auto* c = std::get_if<Constraint>(&it)) out.push_back(c);
    return out;
}

std::vector<const Atom*> Clause::atoms() const {
    std::vector<const Atom*> out;
    for (auto& it : body)
        if (auto* a = std::get_if<Atom>(&it)) out.push_back(a);
    return out;
}

int Clause::atom_pos(int k) const {
    int n = 0;
    for (size_t i = 0; i < body.size(); i++)
        if (std::holds_alternative<Atom>(body[i]) && ++n == k) return (int)i;
    return -1;
}

int Clause::constraint_pos(int k) const {
    int n = 0;
    for (size_t i = 0; i < body.size(); i++)
        if (std::holds_alternative<Constraint>(body[i]) && ++n == k) return (int)i;
    return -1;
}

std::vector<std::pair<std::string, Sort>> Clause::vars() const {
    std::vector<std::pair<std::string, Sort>> raw;
    if (head)
        for (auto& t : head->args) term_vars(t, raw);
    for (auto& it : body) {
        if (auto* c = std::get_if<Constraint>(&it)) {
            constraint_vars(*c, raw);
        } else {
            for (auto& t : std::get<Atom>(it).args) term_vars(t, raw);
        }
    }
    std::vector<std::pair<std::string, Sort>> out;
    std::set<std::string> seen;
    for (auto& v : raw)
        if (seen.insert(v.first).second) out.push_back(v);
    return out;
}

std::set<std::string> Clause::var_names() const {
    std::set<std::string> out;
    for (auto& v : vars()) out.insert(v.first);
    return out;
}

bool Clause::has_list_var() const {
    for (auto& v : vars())
        if (v.second == Sort::List) return true;
    return false;
}

std::string clause_to_string(const Clause& c) {
    std::string s = c.head ? atom_to_string(*c.head) : "false";
    if (c.body.empty()) return s + ".";
    s += " :- ";
    for (size_t i = 0; i < c.body.size(); i++) {
        if (i) s += ", ";
        if (auto* cc = std::get_if<Constraint>(&c.body[i]))
            s += constraint_to_string(*cc);
        else
            s += atom_to_string(std::get<Atom>(c.body[i]));
    }
    return s + ".";
}

// --- program ---

const PredDecl* Program::find_decl(const std::string& name) const {
    for (auto& d : decls)
        if (d.name == name) return &d;
    return nullptr;
}

PredDecl* Program::find_decl(const std::string& name) {
    for (auto& d : decls)
        if (d.name == name) return &d;
    return nullptr;
}

void Program::add_decl(PredDecl d) {
    if (d.modes.empty()) d.modes = default_modes(d.arg_sorts.size());
    decls.push_back(std::move(d));
}

Clause* Program::find_clause(int id) {
    for (auto& c : clauses)
        if (c.id == id) return &c;
    return nullptr;
}

const Clause* Program::find_clause(int id) const {
    for (auto& c : clauses)
        if (c.id == id) return &c;
    return nullptr;
}

int Program::clause_index(int id) const {
    for (size_t i = 0; i < clauses.size(); i++)
        if (clauses[i].id == id) return (int)i;
    return -1;
}

int Program::add_clause(Clause c) {
    c.id = next_clause_id++;
    clauses.push_back(std::move(c));
    return clauses.back().id;
}

void Program::replace_clause(int id, std::vector<Clause> subst) {
    int idx = clause_index(id);
    if (idx < 0) throw std::runtime_error("replace_clause: unknown clause id");
    clauses.erase(clauses.begin() + idx);
    for (auto& c : subst) {
        c.id = next_clause_id++;
        clauses.insert(clauses.begin() + idx, std::move(c));
        idx++;
    }
}

void Program::remove_clause(int id) {
    int idx = clause_index(id);
    if (idx < 0) throw std::runtime_error("remove_clause: unknown clause id");
    clauses.erase(clauses.begin() + idx);
}

std::vector<const Clause*> Program::defining_clauses(const std::string& pred) const {
    std::vector<const Clause*> out;
    for (auto& c : clauses)
        if (c.head && c.head->pred == pred) out.push_back(&c);
    return out;
}

bool Program::has_list_syntax() const {
    for (auto& c : clauses) {
        if (c.has_list_var()) return true;
        if (c.head)
            for (auto& t : c.head->args)
                if (term_has_constructor(t)) return true;
        for (auto& it : c.body)
            if (auto* a = std::get_if<Atom>(&it))
                for (auto& t : a->args)
                    if (term_has_constructor(t)) return true;
    }
    return false;
}

std::string program_to_string(const Program& p) {
    std::ostringstream os;
    for (auto& d : p.decls) {
        os << ":- pred " << d.name << "(";
        for (size_t i = 0; i < d.arg_sorts.size(); i++) {
            if (i) os << ",";
            os << sort_name(d.arg_sorts[i]);
        }
        os << ").\n";
    }
    for (auto& d : p.decls) {
        if (!d.modes_declared) continue;
        os << ":- mode " << d.name << "(";
        for (size_t i = 0; i < d.modes.size(); i++) {
            if (i) os << ",";
            os << (d.modes[i] == Mode::In ? "in" : "out");
        }
        os << ").\n";
    }
    if (!p.decls.empty()) os << "\n";
    for (auto& c : p.clauses) os << clause_to_string(c) << "\n";
    return os.str();
}

std::vector<Mode> default_modes(size_t arity) {
    std::vector<Mode> m(arity, Mode::In);
    if (arity > 0) m.back() = Mode::Out;
    return m;
}

}  // namespace chc
