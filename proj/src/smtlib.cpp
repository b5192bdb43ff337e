#include "chc/smtlib.hpp"

#include <sstream>

namespace chc {

namespace {

const char* smt_sort(Sort s) {
    switch (s) {
        case Sort::Int: return "Int";
        case Sort::Bool: return "Bool";
        case Sort::List: return "IList";
    }
    return "?";
}

std::string smt_term(const TermPtr& t) {
    switch (t->kind) {
        case Term::Kind::Var: return t->name;
        case Term::Kind::IntConst:
            return t->ival < 0 ? "(- " + std::to_string(-t->ival) + ")"
                               : std::to_string(t->ival);
        case Term::Kind::BoolConst: return t->bval ? "true" : "false";
        case Term::Kind::Nil: return "nil";
        case Term::Kind::Cons:
            return "(cons " + smt_term(t->head) + " " + smt_term(t->tail) + ")";
    }
    return "?";
}

std::string smt_expr(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Const:
            return e->value < 0 ? "(- " + std::to_string(-e->value) + ")"
                                : std::to_string(e->value);
        case Expr::Kind::Var: return e->var;
        case Expr::Kind::Add: return "(+ " + smt_expr(e->lhs) + " " + smt_expr(e->rhs) + ")";
        case Expr::Kind::Sub: return "(- " + smt_expr(e->lhs) + " " + smt_expr(e->rhs) + ")";
        case Expr::Kind::Neg: return "(- " + smt_expr(e->lhs) + ")";
        case Expr::Kind::Mul:
            return "(* " + std::to_string(e->value) + " " + smt_expr(e->lhs) + ")";
    }
    return "?";
}

std::string smt_constraint(const Constraint& c) {
    if (c.boolean) {
        std::string eq = "(= " + smt_term(c.blhs) + " " + smt_term(c.brhs) + ")";
        return c.op == CmpOp::Eq ? eq : "(not " + eq + ")";
    }
    std::string l = smt_expr(c.lhs), r = smt_expr(c.rhs);
    switch (c.op) {
        case CmpOp::Eq: return "(= " + l + " " + r + ")";
        case CmpOp::Ne: return "(not (= " + l + " " + r + "))";
        case CmpOp::Le: return "(<= " + l + " " + r + ")";
        case CmpOp::Lt: return "(< " + l + " " + r + ")";
        case CmpOp::Ge: return "(>= " + l + " " + r + ")";
        case CmpOp::Gt: return "(> " + l + " " + r + ")";
    }
    return "?";
}

std::string smt_atom(const Atom& a) {
    if (a.args.empty()) return a.pred;
    std::string s = "(" + a.pred;
    for (auto& t : a.args) s += " " + smt_term(t);
    return s + ")";
}

}  // namespace

std::string emit_smtlib(const Program& p) {
    std::ostringstream os;
    os << "(set-logic HORN)\n";
    if (p.has_list_syntax())
        os << "(declare-datatypes ((IList 0)) (((nil) (cons (hd Int) (tl IList)))))\n";

    // declare only predicates that occur in clauses, in declaration order
    std::set<std::string> used;
    for (auto& c : p.clauses) {
        if (c.head) used.insert(c.head->pred);
        for (auto& it : c.body)
            if (auto* a = std::get_if<Atom>(&it)) used.insert(a->pred);
    }
    for (auto& d : p.decls) {
        if (!used.count(d.name)) continue;
        os << "(declare-fun " << d.name << " (";
        for (size_t i = 0; i < d.arg_sorts.size(); i++) {
            if (i) os << " ";
            os << smt_sort(d.arg_sorts[i]);
        }
        os << ") Bool)\n";
    }

    for (auto& c : p.clauses) {
        std::string head = c.head ? smt_atom(*c.head) : "false";
        std::vector<std::string> parts;
        for (auto& it : c.body) {
            if (auto* cc = std::get_if<Constraint>(&it))
                parts.push_back(smt_constraint(*cc));
            else
                parts.push_back(smt_atom(std::get<Atom>(it)));
        }
        std::string body;
        if (parts.size() == 1) {
            body = parts[0];
        } else if (!parts.empty()) {
            body = "(and";
            for (auto& s : parts) body += " " + s;
            body += ")";
        }
        std::string formula = parts.empty() ? head : "(=> " + body + " " + head + ")";
        auto vars = c.vars();
        if (vars.empty()) {
            os << "(assert " << formula << ")\n";
        } else {
            os << "(assert (forall (";
            for (size_t i = 0; i < vars.size(); i++) {
                if (i) os << " ";
                os << "(" << vars[i].first << " " << smt_sort(vars[i].second) << ")";
            }
            os << ") " << formula << "))\n";
        }
    }
    os << "(check-sat)\n(get-model)\n";
    return os.str();
}

}  // namespace chc
