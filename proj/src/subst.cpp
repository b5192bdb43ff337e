#include "chc/subst.hpp"

#include <stdexcept>

namespace chc {

TermPtr Substitution::lookup(const std::string& v) const {
    auto it = map.find(v);
    return it == map.end() ? nullptr : it->second;
}

TermPtr Substitution::apply(const TermPtr& t) const {
    if (!t) return t;
    switch (t->kind) {
        case Term::Kind::Var: {
            auto img = lookup(t->name);
            return img ? img : t;
        }
        case Term::Kind::Cons: {
            auto h = apply(t->head);
            auto tl = apply(t->tail);
            if (h.get() == t->head.get() && tl.get() == t->tail.get()) return t;
            return Term::cons(h, tl);
        }
        default: return t;
    }
}

ExprPtr Substitution::apply(const ExprPtr& e) const {
    if (!e) return e;
    switch (e->kind) {
        case Expr::Kind::Const: return e;
        case Expr::Kind::Var: {
            auto img = lookup(e->var);
            if (!img) return e;
            if (img->kind == Term::Kind::Var) return Expr::variable(img->name);
            if (img->kind == Term::Kind::IntConst) return Expr::constant(img->ival);
            throw std::runtime_error("substitution maps arithmetic variable to non-arithmetic term");
        }
        case Expr::Kind::Add: return Expr::add(apply(e->lhs), apply(e->rhs));
        case Expr::Kind::Sub: return Expr::sub(apply(e->lhs), apply(e->rhs));
        case Expr::Kind::Neg: return Expr::neg(apply(e->lhs));
        case Expr::Kind::Mul: return Expr::mul(e->value, apply(e->lhs));
    }
    return e;
}

Constraint Substitution::apply(const Constraint& c) const {
    if (c.boolean) return Constraint::bool_cmp(c.op, apply(c.blhs), apply(c.brhs));
    return Constraint::int_cmp(c.op, apply(c.lhs), apply(c.rhs));
}

Atom Substitution::apply(const Atom& a) const {
    Atom out;
    out.pred = a.pred;
    out.args.reserve(a.args.size());
    for (auto& t : a.args) out.args.push_back(apply(t));
    return out;
}

BodyItem Substitution::apply(const BodyItem& it) const {
    if (auto* c = std::get_if<Constraint>(&it)) return apply(*c);
    return apply(std::get<Atom>(it));
}

Clause Substitution::apply(const Clause& c) const {
    Clause out;
    out.id = c.id;
    if (c.head) out.head = apply(*c.head);
    out.body.reserve(c.body.size());
    for (auto& it : c.body) out.body.push_back(apply(it));
    return out;
}

Substitution Substitution::compose(const Substitution& other) const {
    Substitution out;
    for (auto& [v, t] : map) out.map[v] = other.apply(t);
    for (auto& [v, t] : other.map)
        if (!out.map.count(v)) out.map[v] = t;
    return out;
}

Substitution Substitution::inverse() const {
    Substitution out;
    for (auto& [v, t] : map) {
        if (!t || t->kind != Term::Kind::Var)
            throw std::runtime_error("inverse of non-renaming substitution");
        out.map[t->name] = Term::var(v, t->var_sort);
    }
    return out;
}

// --- unification ---

static UnifyStatus unify_rec(TermPtr a, TermPtr b, Substitution& s) {
    a = s.apply(a);
    b = s.apply(b);
    if (a->kind == Term::Kind::Var && b->kind == Term::Kind::Var && a->name == b->name)
        return UnifyStatus::Ok;
    if (a->kind == Term::Kind::Var || b->kind == Term::Kind::Var) {
        if (a->kind != Term::Kind::Var) std::swap(a, b);
        if (a->sort() != b->sort()) return UnifyStatus::SortMismatch;
        if (term_contains_var(b, a->name)) return UnifyStatus::OccursCheck;
        Substitution one;
        one.bind(a->name, b);
        for (auto& [v, t] : s.map) s.map[v] = one.apply(t);
        s.bind(a->name, b);
        return UnifyStatus::Ok;
    }
    if (a->kind != b->kind) {
        if (a->sort() != b->sort()) return UnifyStatus::SortMismatch;
        return UnifyStatus::Clash;
    }
    switch (a->kind) {
        case Term::Kind::IntConst:
            return a->ival == b->ival ? UnifyStatus::Ok : UnifyStatus::Clash;
        case Term::Kind::BoolConst:
            return a->bval == b->bval ? UnifyStatus::Ok : UnifyStatus::Clash;
        case Term::Kind::Nil: return UnifyStatus::Ok;
        case Term::Kind::Cons: {
            auto st = unify_rec(a->head, b->head, s);
            if (st != UnifyStatus::Ok) return st;
            return unify_rec(a->tail, b->tail, s);
        }
        default: return UnifyStatus::Clash;
    }
}

UnifyResult unify(const TermPtr& a, const TermPtr& b) {
    UnifyResult r;
    if (a->sort() != b->sort()) {
        r.status = UnifyStatus::SortMismatch;
        return r;
    }
    r.status = unify_rec(a, b, r.mgu);
    return r;
}

UnifyResult unify_args(const std::vector<TermPtr>& as, const std::vector<TermPtr>& bs) {
    UnifyResult r;
    if (as.size() != bs.size()) {
        r.status = UnifyStatus::Clash;
        return r;
    }
    for (size_t i = 0; i < as.size(); i++) {
        r.status = unify_rec(as[i], bs[i], r.mgu);
        if (r.status != UnifyStatus::Ok) return r;
    }
    return r;
}

// --- renaming apart ---

static std::string base_name(const std::string& v) {
    auto p = v.find_last_of('_');
    if (p == std::string::npos || p == 0) return v;
    for (size_t i = p + 1; i < v.size(); i++)
        if (!isdigit((unsigned char)v[i])) return v;
    return v.substr(0, p);
}

std::pair<Clause, Substitution> rename_apart(const Clause& clause,
                                             const std::set<std::string>& forbidden,
                                             int& counter) {
    Substitution ren;
    std::set<std::string> used = forbidden;
    for (auto& [v, s] : clause.vars()) {
        if (!forbidden.count(v)) {
            used.insert(v);
            continue;  // name is free to keep
        }
        std::string base = base_name(v);
        std::string fresh;
        do {
            fresh = base + "_" + std::to_string(++counter);
        } while (used.count(fresh));
        used.insert(fresh);
        ren.bind(v, Term::var(fresh, s));
    }
    return {ren.apply(clause), ren};
}

// --- variant check ---

static bool variant_rec(const TermPtr& a, const TermPtr& b,
                        std::map<std::string, std::string>& fwd,
                        std::map<std::string, std::string>& bwd) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Term::Kind::Var: {
            if (a->var_sort != b->var_sort) return false;
            auto f = fwd.find(a->name);
            auto g = bwd.find(b->name);
            if (f == fwd.end() && g == bwd.end()) {
                fwd[a->name] = b->name;
                bwd[b->name] = a->name;
                return true;
            }
            return f != fwd.end() && g != bwd.end() && f->second == b->name &&
                   g->second == a->name;
        }
        case Term::Kind::IntConst: return a->ival == b->ival;
        case Term::Kind::BoolConst: return a->bval == b->bval;
        case Term::Kind::Nil: return true;
        case Term::Kind::Cons:
            return variant_rec(a->head, b->head, fwd, bwd) &&
                   variant_rec(a->tail, b->tail, fwd, bwd);
    }
    return false;
}

std::optional<Substitution> is_variant(const std::vector<Atom>& a,
                                       const std::vector<Atom>& b) {
    if (a.size() != b.size()) return std::nullopt;
    std::map<std::string, std::string> fwd, bwd;
    for (size_t i = 0; i < a.size(); i++) {
        if (a[i].pred != b[i].pred || a[i].args.size() != b[i].args.size())
            return std::nullopt;
        for (size_t j = 0; j < a[i].args.size(); j++)
            if (!variant_rec(a[i].args[j], b[i].args[j], fwd, bwd)) return std::nullopt;
    }
    Substitution s;
    // sorts recovered by walking the terms again
    std::vector<std::pair<std::string, Sort>> vs;
    for (auto& at : a)
        for (auto& t : at.args) term_vars(t, vs);
    std::map<std::string, Sort> sorts;
    for (auto& [n, so] : vs) sorts.emplace(n, so);
    for (auto& [x, y] : fwd) s.bind(x, Term::var(y, sorts.at(x)));
    return s;
}

std::optional<Substitution> atom_variant(const Atom& a, const Atom& b) {
    return is_variant({a}, {b});
}

VarPartition partition_vars(const Clause& c) {
    VarPartition p;
    for (auto& [v, s] : c.vars())
        (s == Sort::List ? p.adt_vars : p.base_vars).insert(v);
    return p;
}

}  // namespace chc
