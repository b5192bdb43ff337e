#include "chc/modelcheck.hpp"
#include "chc/linform.hpp"

#include <functional>
#include <sstream>

namespace chc {

namespace {

enum class TV { True, False, Unknown };

TV tv_not(TV a) {
    if (a == TV::True) return TV::False;
    if (a == TV::False) return TV::True;
    return TV::Unknown;
}
TV tv_and(TV a, TV b) {
    if (a == TV::False || b == TV::False) return TV::False;
    if (a == TV::True && b == TV::True) return TV::True;
    return TV::Unknown;
}
TV tv_or(TV a, TV b) {
    if (a == TV::True || b == TV::True) return TV::True;
    if (a == TV::False && b == TV::False) return TV::False;
    return TV::Unknown;
}

struct PartialEnv {
    const std::map<std::string, long long>* vals;
    bool lookup(const std::string& v, long long& out) const {
        auto it = vals->find(v);
        if (it == vals->end()) return false;
        out = it->second;
        return true;
    }
};

bool eval_expr_partial(const ExprPtr& e, const PartialEnv& env, long long& out) {
    switch (e->kind) {
        case Expr::Kind::Const: out = e->value; return true;
        case Expr::Kind::Var: return env.lookup(e->var, out);
        case Expr::Kind::Add:
        case Expr::Kind::Sub: {
            long long l, r;
            if (!eval_expr_partial(e->lhs, env, l) || !eval_expr_partial(e->rhs, env, r))
                return false;
            out = e->kind == Expr::Kind::Add ? l + r : l - r;
            return true;
        }
        case Expr::Kind::Neg: {
            long long l;
            if (!eval_expr_partial(e->lhs, env, l)) return false;
            out = -l;
            return true;
        }
        case Expr::Kind::Mul: {
            long long l;
            if (!eval_expr_partial(e->lhs, env, l)) return false;
            out = e->value * l;
            return true;
        }
    }
    return false;
}

TV eval_cmp_partial(const Constraint& c, const PartialEnv& env) {
    if (c.boolean) {
        auto val = [&](const TermPtr& t, long long& out) {
            if (t->kind == Term::Kind::BoolConst) {
                out = t->bval ? 1 : 0;
                return true;
            }
            return env.lookup(t->name, out);
        };
        long long l, r;
        if (!val(c.blhs, l) || !val(c.brhs, r)) return TV::Unknown;
        bool eq = l == r;
        return (c.op == CmpOp::Eq ? eq : !eq) ? TV::True : TV::False;
    }
    long long l, r;
    if (!eval_expr_partial(c.lhs, env, l) || !eval_expr_partial(c.rhs, env, r))
        return TV::Unknown;
    bool ok = false;
    switch (c.op) {
        case CmpOp::Eq: ok = l == r; break;
        case CmpOp::Ne: ok = l != r; break;
        case CmpOp::Le: ok = l <= r; break;
        case CmpOp::Lt: ok = l < r; break;
        case CmpOp::Ge: ok = l >= r; break;
        case CmpOp::Gt: ok = l > r; break;
    }
    return ok ? TV::True : TV::False;
}

TV eval_formula_partial(const ModelFormula& f, const PartialEnv& env) {
    switch (f.kind) {
        case ModelFormula::Kind::True: return TV::True;
        case ModelFormula::Kind::False: return TV::False;
        case ModelFormula::Kind::Cmp: return eval_cmp_partial(f.cmp, env);
        case ModelFormula::Kind::Not: return tv_not(eval_formula_partial(f.kids[0], env));
        case ModelFormula::Kind::And: {
            TV acc = TV::True;
            for (auto& k : f.kids) acc = tv_and(acc, eval_formula_partial(k, env));
            return acc;
        }
        case ModelFormula::Kind::Or: {
            TV acc = TV::False;
            for (auto& k : f.kids) acc = tv_or(acc, eval_formula_partial(k, env));
            return acc;
        }
    }
    return TV::Unknown;
}

// Substitute formula parameters by the atom's argument terms (variables or
// constants), renaming formula vars into clause-var space.
ModelFormula instantiate(const ModelFormula& f,
                         const std::map<std::string, TermPtr>& param_map);

Constraint instantiate_cmp(const Constraint& c,
                           const std::map<std::string, TermPtr>& pm) {
    auto sub_term = [&](const TermPtr& t) -> TermPtr {
        if (t && t->kind == Term::Kind::Var) {
            auto it = pm.find(t->name);
            if (it != pm.end()) return it->second;
        }
        return t;
    };
    std::function<ExprPtr(const ExprPtr&)> sub_expr = [&](const ExprPtr& e) -> ExprPtr {
        switch (e->kind) {
            case Expr::Kind::Const: return e;
            case Expr::Kind::Var: {
                auto it = pm.find(e->var);
                if (it == pm.end()) return e;
                const TermPtr& t = it->second;
                if (t->kind == Term::Kind::Var) return Expr::variable(t->name);
                if (t->kind == Term::Kind::IntConst) return Expr::constant(t->ival);
                if (t->kind == Term::Kind::BoolConst) return Expr::constant(t->bval ? 1 : 0);
                return e;
            }
            case Expr::Kind::Add: return Expr::add(sub_expr(e->lhs), sub_expr(e->rhs));
            case Expr::Kind::Sub: return Expr::sub(sub_expr(e->lhs), sub_expr(e->rhs));
            case Expr::Kind::Neg: return Expr::neg(sub_expr(e->lhs));
            case Expr::Kind::Mul: return Expr::mul(e->value, sub_expr(e->lhs));
        }
        return e;
    };
    if (c.boolean) return Constraint::bool_cmp(c.op, sub_term(c.blhs), sub_term(c.brhs));
    return Constraint::int_cmp(c.op, sub_expr(c.lhs), sub_expr(c.rhs));
}

ModelFormula instantiate(const ModelFormula& f,
                         const std::map<std::string, TermPtr>& pm) {
    ModelFormula out;
    out.kind = f.kind;
    if (f.kind == ModelFormula::Kind::Cmp) out.cmp = instantiate_cmp(f.cmp, pm);
    for (auto& k : f.kids) out.kids.push_back(instantiate(k, pm));
    return out;
}

}  // namespace

std::string Counterexample::to_string(const Program& p) const {
    std::ostringstream os;
    os << "clause " << clause_id << ": {";
    bool first = true;
    const Clause* c = p.find_clause(clause_id);
    std::map<std::string, Sort> sorts;
    if (c)
        for (auto& [v, s] : c->vars()) sorts[v] = s;
    for (auto& [v, val] : assignment) {
        if (!first) os << ", ";
        first = false;
        os << v << ": ";
        if (sorts.count(v) && sorts[v] == Sort::Bool)
            os << (val ? "true" : "false");
        else
            os << val;
    }
    os << "}";
    return os.str();
}

CheckResult check_model(const Program& p, const Model& m, const Box& box,
                        bool missing_is_error) {
    CheckResult res;
    if (p.has_list_syntax()) throw NotADTFree();

    Model work = m;
    for (auto& d : p.decls) {
        bool used = false;
        for (auto& c : p.clauses) {
            if (c.head && c.head->pred == d.name) used = true;
            for (auto& it : c.body)
                if (auto* a = std::get_if<Atom>(&it))
                    if (a->pred == d.name) used = true;
        }
        if (!used) continue;
        if (!work.entries.count(d.name)) {
            if (missing_is_error) throw MissingPredicate(d.name);
            ModelEntry e;
            e.formula.kind = ModelFormula::Kind::True;
            for (size_t i = 0; i < d.arg_sorts.size(); i++)
                e.params.push_back("P" + std::to_string(i));
            work.entries[d.name] = e;
            res.warnings.push_back("model has no entry for " + d.name +
                                   "; assuming true");
        }
    }

    // clauses examined in id order; the lowest-id counterexample wins
    std::vector<const Clause*> order;
    for (auto& c : p.clauses) order.push_back(&c);
    std::sort(order.begin(), order.end(),
              [](const Clause* a, const Clause* b) { return a->id < b->id; });

    for (auto* c : order) {
        // instantiate: body items become formulas; head becomes a formula
        std::vector<ModelFormula> body;
        for (auto& it : c->body) {
            if (auto* cc = std::get_if<Constraint>(&it)) {
                ModelFormula f;
                f.kind = ModelFormula::Kind::Cmp;
                f.cmp = *cc;
                body.push_back(std::move(f));
            } else {
                auto& a = std::get<Atom>(it);
                auto it2 = work.entries.find(a.pred);
                if (it2 == work.entries.end()) throw MissingPredicate(a.pred);
                auto& entry = it2->second;
                std::map<std::string, TermPtr> pm;
                for (size_t i = 0; i < entry.params.size() && i < a.args.size(); i++)
                    pm[entry.params[i]] = a.args[i];
                body.push_back(instantiate(entry.formula, pm));
            }
        }
        ModelFormula head;
        if (!c->head) {
            head.kind = ModelFormula::Kind::False;
        } else {
            auto it2 = work.entries.find(c->head->pred);
            if (it2 == work.entries.end()) throw MissingPredicate(c->head->pred);
            std::map<std::string, TermPtr> pm;
            for (size_t i = 0; i < it2->second.params.size() && i < c->head->args.size(); i++)
                pm[it2->second.params[i]] = c->head->args[i];
            head = instantiate(it2->second.formula, pm);
        }

        auto vars = c->vars();
        std::map<std::string, long long> env;
        unsigned long long visited = 0;
        bool found = false;
        std::map<std::string, long long> cex_env;

        std::function<void(size_t)> search = [&](size_t vi) {
            if (found) return;
            if (++visited > box.cap) throw BoxTooLarge();
            PartialEnv pe{&env};
            // prune when some body conjunct is already false or the head is
            // already true
            for (auto& f : body)
                if (eval_formula_partial(f, pe) == TV::False) return;
            if (eval_formula_partial(head, pe) == TV::True) return;
            if (vi == vars.size()) {
                for (auto& f : body)
                    if (eval_formula_partial(f, pe) != TV::True) return;
                if (eval_formula_partial(head, pe) == TV::False) {
                    found = true;
                    cex_env = env;
                }
                return;
            }
            auto& [name, sort] = vars[vi];
            if (sort == Sort::Bool) {
                for (long long v : {0, 1}) {
                    env[name] = v;
                    search(vi + 1);
                    if (found) return;
                }
            } else {
                for (long long v = box.lo; v <= box.hi; v++) {
                    env[name] = v;
                    search(vi + 1);
                    if (found) return;
                }
            }
            env.erase(name);
        };
        search(0);
        if (found) {
            res.valid = false;
            res.cex = Counterexample{c->id, cex_env};
            return res;
        }
    }
    return res;
}

FunctionalityResult check_functionality(const ModelEntry& entry,
                                        const std::vector<Sort>& arg_sorts,
                                        const std::vector<Mode>& modes, const Box& box) {
    FunctionalityResult res;
    size_t n = arg_sorts.size();
    std::vector<size_t> ins, outs;
    for (size_t i = 0; i < n; i++)
        (modes[i] == Mode::In ? ins : outs).push_back(i);

    std::vector<long long> vals(n, 0);
    std::map<std::string, long long> env;
    auto sync_env = [&]() {
        env.clear();
        for (size_t i = 0; i < n && i < entry.params.size(); i++)
            env[entry.params[i]] = vals[i];
    };

    unsigned long long visited = 0;
    std::function<bool(size_t)> enum_outs;  // returns true when a violation was found
    std::optional<std::vector<long long>> first_out;

    enum_outs = [&](size_t k) -> bool {
        if (++visited > box.cap) throw BoxTooLarge();
        if (k == outs.size()) {
            sync_env();
            PartialEnv pe{&env};
            if (eval_formula_partial(entry.formula, pe) != TV::True) return false;
            std::vector<long long> cur;
            for (size_t i : outs) cur.push_back(vals[i]);
            if (!first_out) {
                first_out = cur;
                return false;
            }
            if (*first_out != cur) {
                res.functional = false;
                for (size_t i : ins)
                    res.inputs[i < entry.params.size() ? entry.params[i]
                                                       : "arg" + std::to_string(i)] = vals[i];
                res.out1 = *first_out;
                res.out2 = cur;
                return true;
            }
            return false;
        }
        size_t i = outs[k];
        if (arg_sorts[i] == Sort::Bool) {
            for (long long v : {0, 1}) {
                vals[i] = v;
                if (enum_outs(k + 1)) return true;
            }
        } else {
            for (long long v = box.lo; v <= box.hi; v++) {
                vals[i] = v;
                if (enum_outs(k + 1)) return true;
            }
        }
        return false;
    };

    std::function<bool(size_t)> enum_ins = [&](size_t k) -> bool {
        if (k == ins.size()) {
            first_out.reset();
            return enum_outs(0);
        }
        size_t i = ins[k];
        if (arg_sorts[i] == Sort::Bool) {
            for (long long v : {0, 1}) {
                vals[i] = v;
                if (enum_ins(k + 1)) return true;
            }
        } else {
            for (long long v = box.lo; v <= box.hi; v++) {
                vals[i] = v;
                if (enum_ins(k + 1)) return true;
            }
        }
        return false;
    };
    enum_ins(0);
    return res;
}

// --- lemma extraction ---

namespace {

std::string join_names(const std::vector<std::pair<std::string, Sort>>& vs) {
    std::string s;
    for (size_t i = 0; i < vs.size(); i++) {
        if (i) s += ",";
        s += vs[i].first;
    }
    return s;
}

// Renders one comparison, solving an equality for the designated output
// variable when its coefficient is +-1.
std::string render_cmp(const Constraint& c, const std::set<std::string>& out_vars) {
    if (!c.boolean && c.op == CmpOp::Eq) {
        LinForm f = lin_of_expr(c.lhs);
        f.add(lin_of_expr(c.rhs), -1);
        for (auto& out : out_vars) {
            auto it = f.coeffs.find(out);
            if (it == f.coeffs.end() || (it->second != 1 && it->second != -1)) continue;
            long long coeff = it->second;
            LinForm rest = f;
            rest.coeffs.erase(out);
            if (coeff == 1) {  // out + rest = 0  =>  out = -rest
                LinForm neg;
                neg.add(rest, -1);
                rest = neg;
            }
            return out + " = " + expr_to_string(expr_of_lin(rest));
        }
    }
    std::string s = constraint_to_string(c);
    // normalized spacing around the operator
    std::string spaced;
    if (c.boolean)
        spaced = term_to_string(c.blhs) + " " + cmp_op_text(c.op) + " " +
                 term_to_string(c.brhs);
    else
        spaced = expr_to_string(c.lhs) + " " + cmp_op_text(c.op) + " " +
                 expr_to_string(c.rhs);
    return spaced;
}

std::string render_formula(const ModelFormula& f, const std::set<std::string>& out_vars) {
    switch (f.kind) {
        case ModelFormula::Kind::True: return "true";
        case ModelFormula::Kind::False: return "false";
        case ModelFormula::Kind::Cmp: return render_cmp(f.cmp, out_vars);
        case ModelFormula::Kind::Not: return "¬(" + render_formula(f.kids[0], out_vars) + ")";
        case ModelFormula::Kind::And: {
            std::string s;
            for (size_t i = 0; i < f.kids.size(); i++) {
                if (i) s += " ∧ ";
                s += render_formula(f.kids[i], out_vars);
            }
            return s;
        }
        case ModelFormula::Kind::Or: {
            std::string s;
            for (size_t i = 0; i < f.kids.size(); i++) {
                if (i) s += " ∨ ";
                s += "(" + render_formula(f.kids[i], out_vars) + ")";
            }
            return s;
        }
    }
    return "?";
}

}  // namespace

std::string extract_lemma(const Clause& def_clause, const PredDecl& decl,
                          const ModelEntry& entry) {
    if (!def_clause.head) throw std::runtime_error("definition clause has no head");
    const Atom& head = *def_clause.head;

    std::map<std::string, TermPtr> pm;
    for (size_t i = 0; i < entry.params.size() && i < head.args.size(); i++)
        pm[entry.params[i]] = head.args[i];
    ModelFormula inst = instantiate(entry.formula, pm);

    std::set<std::string> out_vars;
    for (size_t i = 0; i < decl.modes.size() && i < head.args.size(); i++)
        if (decl.modes[i] == Mode::Out && head.args[i]->is_var())
            out_vars.insert(head.args[i]->name);

    std::ostringstream os;
    os << "∀" << join_names(def_clause.vars()) << ". ";
    bool first = true;
    for (auto& it : def_clause.body) {
        if (!first) os << " ∧ ";
        first = false;
        if (auto* cc = std::get_if<Constraint>(&it))
            os << constraint_to_string(*cc);
        else
            os << atom_to_string(std::get<Atom>(it));
    }
    os << " → (" << render_formula(inst, out_vars) << ")";
    return os.str();
}

}  // namespace chc
