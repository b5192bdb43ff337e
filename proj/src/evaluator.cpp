#include "chc/evaluator.hpp"

#include <algorithm>
#include <sstream>

namespace chc {

int ListTable::cons(long long head, int tail) {
    auto key = std::make_pair(head, tail);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    if (lengths[tail] + 1 > max_len) return -1;
    nodes.push_back(key);
    lengths.push_back(lengths[tail] + 1);
    int id = (int)nodes.size() - 1;
    index[key] = id;
    return id;
}

std::string ListTable::to_string(int id) const {
    std::string s = "[";
    bool first = true;
    while (id != 0) {
        if (!first) s += ",";
        s += std::to_string(nodes[id].first);
        first = false;
        id = nodes[id].second;
    }
    return s + "]";
}

size_t Extension::total_tuples() const {
    size_t n = 0;
    for (auto& [_, r] : rels) n += r.size();
    return n;
}

namespace {

struct Env {
    std::map<std::string, long long> vals;

    bool bound(const std::string& v) const { return vals.count(v) > 0; }
    long long get(const std::string& v) const { return vals.at(v); }
};

struct Evaluator {
    const Program& prog;
    const Universe& uni;
    Extension ext;
    unsigned long long work = 0;
    // provenance: pred -> tuple -> first derivation
    std::map<std::string, std::map<Tuple, GroundStep>> prov;

    Evaluator(const Program& p, const Universe& u) : prog(p), uni(u) {
        ext.lists.max_len = u.max_list_len;
        // intern every list over the universe so ids are stable
        std::vector<int> cur{0};
        for (int len = 1; len <= u.max_list_len; len++) {
            std::vector<int> next;
            for (long long v = u.int_lo; v <= u.int_hi; v++)
                for (int t : cur) next.push_back(ext.lists.cons(v, t));
            cur = std::move(next);
        }
    }

    void tick() {
        if (++work > uni.work_cap) throw UniverseTooLarge();
    }

    // evaluate a ground term to a value; returns false if the term falls
    // outside the universe (e.g. a list grows too long)
    bool eval_term(const TermPtr& t, const Env& env, long long& out) {
        switch (t->kind) {
            case Term::Kind::Var: out = env.get(t->name); return true;
            case Term::Kind::IntConst: out = t->ival; return true;
            case Term::Kind::BoolConst: out = t->bval ? 1 : 0; return true;
            case Term::Kind::Nil: out = 0; return true;
            case Term::Kind::Cons: {
                long long h, tl;
                if (!eval_term(t->head, env, h) || !eval_term(t->tail, env, tl))
                    return false;
                int id = ext.lists.cons(h, (int)tl);
                if (id < 0) return false;
                out = id;
                return true;
            }
        }
        return false;
    }

    bool match_term(const TermPtr& t, long long value, Env& env) {
        switch (t->kind) {
            case Term::Kind::Var: {
                auto it = env.vals.find(t->name);
                if (it != env.vals.end()) return it->second == value;
                env.vals[t->name] = value;
                return true;
            }
            case Term::Kind::IntConst: return t->ival == value;
            case Term::Kind::BoolConst: return (t->bval ? 1 : 0) == value;
            case Term::Kind::Nil: return value == 0;
            case Term::Kind::Cons: {
                if (value == 0) return false;
                auto [h, tl] = ext.lists.nodes[(size_t)value];
                return match_term(t->head, h, env) && match_term(t->tail, tl, env);
            }
        }
        return false;
    }

    long long eval_expr(const ExprPtr& e, const Env& env) {
        switch (e->kind) {
            case Expr::Kind::Const: return e->value;
            case Expr::Kind::Var: return env.get(e->var);
            case Expr::Kind::Add: return eval_expr(e->lhs, env) + eval_expr(e->rhs, env);
            case Expr::Kind::Sub: return eval_expr(e->lhs, env) - eval_expr(e->rhs, env);
            case Expr::Kind::Neg: return -eval_expr(e->lhs, env);
            case Expr::Kind::Mul: return e->value * eval_expr(e->lhs, env);
        }
        return 0;
    }

    bool constraint_bound(const Constraint& c, const Env& env) {
        std::vector<std::pair<std::string, Sort>> vs;
        constraint_vars(c, vs);
        for (auto& [v, s] : vs)
            if (!env.bound(v)) return false;
        return true;
    }

    bool eval_constraint(const Constraint& c, const Env& env) {
        if (c.boolean) {
            long long l, r;
            eval_term(c.blhs, env, l);
            eval_term(c.brhs, env, r);
            return c.op == CmpOp::Eq ? l == r : l != r;
        }
        long long l = eval_expr(c.lhs, env), r = eval_expr(c.rhs, env);
        switch (c.op) {
            case CmpOp::Eq: return l == r;
            case CmpOp::Ne: return l != r;
            case CmpOp::Le: return l <= r;
            case CmpOp::Lt: return l < r;
            case CmpOp::Ge: return l >= r;
            case CmpOp::Gt: return l > r;
        }
        return false;
    }

    // constraints are tested as soon as all their variables are bound
    bool check_new(const Clause& c, Env& env, std::vector<bool>& done) {
        auto cs = c.constraints();
        for (size_t i = 0; i < cs.size(); i++) {
            if (done[i]) continue;
            if (!constraint_bound(*cs[i], env)) continue;
            if (!eval_constraint(*cs[i], env)) return false;
            done[i] = true;
        }
        return true;
    }

    // enumerate satisfying assignments of a clause body; relations chosen
    // per atom occurrence (semi-naive needs different rounds per position)
    void for_each_instance(const Clause& c,
                           const std::vector<const std::set<Tuple>*>& rels,
                           const std::function<void(const Env&)>& yield) {
        auto atoms = c.atoms();
        std::vector<std::pair<std::string, Sort>> free_vars = c.vars();
        Env env;
        std::vector<bool> done(c.constraints().size(), false);

        std::function<void(size_t)> enum_free;
        std::function<void(size_t)> join = [&](size_t i) {
            if (i == atoms.size()) {
                enum_free(0);
                return;
            }
            for (auto& tup : *rels[i]) {
                tick();
                Env saved = env;
                std::vector<bool> saved_done = done;
                bool ok = tup.size() == atoms[i]->args.size();
                for (size_t a = 0; ok && a < tup.size(); a++)
                    ok = match_term(atoms[i]->args[a], tup[a], env);
                if (ok && check_new(c, env, done)) join(i + 1);
                env = std::move(saved);
                done = std::move(saved_done);
            }
        };
        enum_free = [&](size_t vi) {
            if (vi == free_vars.size()) {
                yield(env);
                return;
            }
            auto& [name, sort] = free_vars[vi];
            if (env.bound(name)) {
                enum_free(vi + 1);
                return;
            }
            std::vector<long long> range;
            if (sort == Sort::Int) {
                for (long long v = uni.int_lo; v <= uni.int_hi; v++) range.push_back(v);
            } else if (sort == Sort::Bool) {
                range = {0, 1};
            } else {
                for (int id = 0; id < (int)ext.lists.nodes.size(); id++) range.push_back(id);
            }
            for (long long v : range) {
                tick();
                Env saved = env;
                std::vector<bool> saved_done = done;
                env.vals[name] = v;
                if (check_new(c, env, done)) enum_free(vi + 1);
                env = std::move(saved);
                done = std::move(saved_done);
            }
        };
        join(0);
    }

    // evaluate one clause and add new head tuples; returns them
    void fire(const Clause& c, const std::vector<const std::set<Tuple>*>& rels,
              std::set<Tuple>& out_new, const std::set<Tuple>& existing) {
        if (!c.head) return;
        for_each_instance(c, rels, [&](const Env& env) {
            Tuple head;
            head.reserve(c.head->args.size());
            for (auto& t : c.head->args) {
                long long v;
                if (!eval_term(t, env, v)) return;
                head.push_back(v);
            }
            if (existing.count(head) || out_new.count(head)) return;
            out_new.insert(head);
            auto& slot = prov[c.head->pred][head];
            slot.clause_id = c.id;
            slot.env = env.vals;
        });
    }

    void check_constants(bool strict) {
        if (!strict) return;
        std::function<void(const TermPtr&)> scan = [&](const TermPtr& t) {
            if (t->kind == Term::Kind::IntConst &&
                (t->ival < uni.int_lo || t->ival > uni.int_hi))
                throw UniverseTooSmall(t->ival);
            if (t->kind == Term::Kind::Cons) {
                scan(t->head);
                scan(t->tail);
            }
        };
        for (auto& c : prog.clauses) {
            if (c.head)
                for (auto& t : c.head->args) scan(t);
            for (auto& it : c.body)
                if (auto* a = std::get_if<Atom>(&it))
                    for (auto& t : a->args) scan(t);
        }
    }

    void run(bool strict) {
        check_constants(strict);
        std::map<std::string, std::set<Tuple>> full, delta, old_full;

        auto rel_of = [&](std::map<std::string, std::set<Tuple>>& m,
                          const std::string& pred) -> const std::set<Tuple>* {
            return &m[pred];
        };

        // round 0: plain evaluation against the empty model
        for (auto& c : prog.clauses) {
            if (!c.head) continue;
            std::vector<const std::set<Tuple>*> rels(c.atoms().size(), nullptr);
            bool any_empty = false;
            for (size_t i = 0; i < rels.size(); i++) {
                rels[i] = rel_of(full, c.atoms()[i]->pred);
                any_empty |= rels[i]->empty();
            }
            if (!rels.empty() && any_empty) continue;
            fire(c, rels, delta[c.head->pred], full[c.head->pred]);
        }

        while (true) {
            bool more = false;
            for (auto& [pred, ts] : delta)
                if (!ts.empty()) more = true;
            if (!more) break;
            old_full = full;
            for (auto& [pred, ts] : delta) full[pred].insert(ts.begin(), ts.end());

            std::map<std::string, std::set<Tuple>> next;
            for (auto& c : prog.clauses) {
                if (!c.head) continue;
                auto atoms = c.atoms();
                if (atoms.empty()) continue;  // facts never refire
                for (size_t di = 0; di < atoms.size(); di++) {
                    auto* d = rel_of(delta, atoms[di]->pred);
                    if (d->empty()) continue;
                    std::vector<const std::set<Tuple>*> rels(atoms.size());
                    bool feasible = true;
                    for (size_t i = 0; i < atoms.size(); i++) {
                        if (i < di)
                            rels[i] = rel_of(full, atoms[i]->pred);
                        else if (i == di)
                            rels[i] = d;
                        else
                            rels[i] = rel_of(old_full, atoms[i]->pred);
                        feasible &= !rels[i]->empty();
                    }
                    if (!feasible) continue;
                    fire(c, rels, next[c.head->pred], full[c.head->pred]);
                }
            }
            delta = std::move(next);
        }
        ext.rels = std::move(full);
        // drop empty relations for a tidy result
        for (auto it = ext.rels.begin(); it != ext.rels.end();)
            it = it->second.empty() ? ext.rels.erase(it) : std::next(it);
    }

    DerivationNode derive(const std::string& pred, const Tuple& t) {
        DerivationNode n;
        const GroundStep& gs = prov.at(pred).at(t);
        n.step = gs;
        const Clause* c = prog.find_clause(gs.clause_id);
        n.ground_head = ground_atom(*c->head, gs.env);
        Env env;
        env.vals = gs.env;
        for (auto* a : c->atoms()) {
            Tuple sub;
            for (auto& arg : a->args) {
                long long v;
                eval_term(arg, env, v);
                sub.push_back(v);
            }
            n.children.push_back(derive(a->pred, sub));
        }
        return n;
    }

    Atom ground_atom(const Atom& a, const std::map<std::string, long long>& env) {
        Env e;
        e.vals = env;
        Atom out;
        out.pred = a.pred;
        const PredDecl* d = prog.find_decl(a.pred);
        for (size_t i = 0; i < a.args.size(); i++) {
            long long v;
            eval_term(a.args[i], e, v);
            Sort s = d ? d->arg_sorts[i] : Sort::Int;
            if (s == Sort::Int)
                out.args.push_back(Term::int_const(v));
            else if (s == Sort::Bool)
                out.args.push_back(Term::bool_const(v != 0));
            else
                out.args.push_back(Term::var(ext.lists.to_string((int)v), Sort::List));
        }
        return out;
    }
};

}  // namespace

Extension least_model(const Program& p, const Universe& u, bool strict_constants) {
    Evaluator ev(p, u);
    ev.run(strict_constants);
    return std::move(ev.ext);
}

Extension least_model_naive(const Program& p, const Universe& u) {
    Evaluator ev(p, u);
    std::map<std::string, std::set<Tuple>> full;
    while (true) {
        std::map<std::string, std::set<Tuple>> add;
        for (auto& c : p.clauses) {
            if (!c.head) continue;
            auto atoms = c.atoms();
            std::vector<const std::set<Tuple>*> rels;
            bool feasible = true;
            for (auto* a : atoms) {
                rels.push_back(&full[a->pred]);
                feasible &= !rels.back()->empty();
            }
            if (!atoms.empty() && !feasible) continue;
            ev.fire(c, rels, add[c.head->pred], full[c.head->pred]);
        }
        size_t before = 0, grew = 0;
        for (auto& [pred, ts] : add) {
            before = full[pred].size();
            full[pred].insert(ts.begin(), ts.end());
            grew += full[pred].size() - before;
        }
        if (grew == 0) break;
    }
    ev.ext.rels = std::move(full);
    for (auto it = ev.ext.rels.begin(); it != ev.ext.rels.end();)
        it = it->second.empty() ? ev.ext.rels.erase(it) : std::next(it);
    return std::move(ev.ext);
}

BoundedResult bounded_sat(const Program& p, const Universe& u) {
    Evaluator ev(p, u);
    ev.run(false);
    BoundedResult res;
    for (auto& c : p.clauses) {
        if (c.head) continue;
        std::vector<const std::set<Tuple>*> rels;
        bool feasible = true;
        static const std::set<Tuple> empty;
        for (auto* a : c.atoms()) {
            auto it = ev.ext.rels.find(a->pred);
            rels.push_back(it == ev.ext.rels.end() ? &empty : &it->second);
            feasible &= !rels.back()->empty();
        }
        if (!c.atoms().empty() && !feasible) continue;
        bool found = false;
        DerivationNode node;
        ev.for_each_instance(c, rels, [&](const Env& env) {
            if (found) return;
            found = true;
            node.step.clause_id = c.id;
            node.step.env = env.vals;
            node.is_goal = true;
            for (auto* a : c.atoms()) {
                Tuple sub;
                for (auto& arg : a->args) {
                    long long v;
                    ev.eval_term(arg, env, v);
                    sub.push_back(v);
                }
                node.children.push_back(ev.derive(a->pred, sub));
            }
        });
        if (found) {
            res.false_derived = true;
            res.witness = std::move(node);
            break;
        }
    }
    res.model = std::move(ev.ext);
    return res;
}

CompareResult compare_programs(const Program& a, const Program& b, const Universe& u) {
    CompareResult r{CompareVerdict::Agree, bounded_sat(a, u), bounded_sat(b, u)};
    if (r.left.false_derived != r.right.false_derived) r.verdict = CompareVerdict::Disagree;
    return r;
}

std::string witness_to_string(const DerivationNode& n, const Program& p, int indent) {
    std::ostringstream os;
    std::string pad(indent * 2, ' ');
    os << pad << (n.is_goal ? "false" : atom_to_string(n.ground_head)) << "   [clause "
       << n.step.clause_id << "]\n";
    for (auto& ch : n.children) os << witness_to_string(ch, p, indent + 1);
    return os.str();
}

bool validate_witness(const DerivationNode& n, const Program& p, const Extension& ext) {
    const Clause* c = p.find_clause(n.step.clause_id);
    if (!c) return false;
    Evaluator ev(p, Universe{});  // only used for constraint evaluation
    ev.ext.lists = ext.lists;
    // every clause variable must be assigned and every constraint must hold
    for (auto& [v, s] : c->vars())
        if (!n.step.env.count(v)) return false;
    struct EnvShim {
        std::map<std::string, long long> vals;
    };
    for (auto* cc : c->constraints()) {
        // reuse the evaluator's constraint logic through a ground check
        std::vector<std::pair<std::string, Sort>> vs;
        constraint_vars(*cc, vs);
        // (constraint evaluation below never consults the universe)
        struct E {
            const std::map<std::string, long long>& m;
            long long get(const std::string& v) const { return m.at(v); }
        };
        // evaluate via a tiny recursive lambda
        std::function<long long(const ExprPtr&)> eval = [&](const ExprPtr& e) -> long long {
            switch (e->kind) {
                case Expr::Kind::Const: return e->value;
                case Expr::Kind::Var: return n.step.env.at(e->var);
                case Expr::Kind::Add: return eval(e->lhs) + eval(e->rhs);
                case Expr::Kind::Sub: return eval(e->lhs) - eval(e->rhs);
                case Expr::Kind::Neg: return -eval(e->lhs);
                case Expr::Kind::Mul: return e->value * eval(e->lhs);
            }
            return 0;
        };
        auto tval = [&](const TermPtr& t) -> long long {
            if (t->kind == Term::Kind::Var) return n.step.env.at(t->name);
            return t->bval ? 1 : 0;
        };
        bool ok;
        if (cc->boolean) {
            bool eq = tval(cc->blhs) == tval(cc->brhs);
            ok = cc->op == CmpOp::Eq ? eq : !eq;
        } else {
            long long l = eval(cc->lhs), r = eval(cc->rhs);
            switch (cc->op) {
                case CmpOp::Eq: ok = l == r; break;
                case CmpOp::Ne: ok = l != r; break;
                case CmpOp::Le: ok = l <= r; break;
                case CmpOp::Lt: ok = l < r; break;
                case CmpOp::Ge: ok = l >= r; break;
                case CmpOp::Gt: ok = l > r; break;
            }
        }
        if (!ok) return false;
    }
    for (auto& ch : n.children)
        if (!validate_witness(ch, p, ext)) return false;
    return true;
}

}  // namespace chc
