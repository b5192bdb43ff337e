#include "chc/transform.hpp"

#include "chc/consat.hpp"
#include "chc/linform.hpp"
#include "chc/parser.hpp"
#include "chc/variant.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace chc {

// defined in parser.cpp
Clause parse_definition_clause(const std::string& text, const Program& p,
                               PredDecl* inferred);

namespace {

std::vector<std::string> tokenize_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',') {
            if (!cur.empty()) out.push_back(std::stoi(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

}  // namespace

void dedup_constraints(Clause& c) {
    std::set<NormConstraint> seen;
    std::vector<BodyItem> out;
    for (auto& it : c.body) {
        if (auto* cc = std::get_if<Constraint>(&it)) {
            if (!seen.insert(normalize(*cc)).second) continue;
        }
        out.push_back(it);
    }
    c.body = std::move(out);
}

std::vector<Mode> introduced_modes(const std::vector<TermPtr>& head_args,
                                   const std::vector<BodyItem>& body, const Program& p) {
    std::vector<Mode> modes;
    for (auto& arg : head_args) {
        Mode m = Mode::In;
        if (arg->is_var()) {
            for (auto& it : body) {
                auto* a = std::get_if<Atom>(&it);
                if (!a) continue;
                const PredDecl* d = p.find_decl(a->pred);
                if (!d) continue;
                for (size_t i = 0; i < a->args.size(); i++)
                    if (d->modes[i] == Mode::Out && a->args[i]->is_var() &&
                        a->args[i]->name == arg->name)
                        m = Mode::Out;
            }
        }
        modes.push_back(m);
    }
    return modes;
}

// --- step parsing ---

std::optional<Step> parse_step(const std::string& line, const Program& p) {
    std::string s = line;
    auto hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    while (!s.empty() && isspace((unsigned char)s.back())) s.pop_back();
    size_t b = 0;
    while (b < s.size() && isspace((unsigned char)s[b])) b++;
    s = s.substr(b);
    if (s.empty()) return std::nullopt;

    Step st;
    st.text = s;
    if (s.rfind("define ", 0) == 0) {
        st.kind = Step::Kind::Define;
        std::string rest = s.substr(7);
        PredDecl decl;
        Clause c = parse_definition_clause(rest, p, &decl);
        st.name = decl.name;
        st.def_head = c.head;
        st.def_body = c.body;
        return st;
    }
    auto toks = tokenize_ws(s);
    auto& verb = toks[0];
    auto need = [&](size_t n) {
        if (toks.size() < n) throw TransformError("malformed step: " + s);
    };
    if (verb == "unfold") {
        need(3);
        st.kind = Step::Kind::Unfold;
        st.clause_id = std::stoi(toks[1]);
        st.atom_index = std::stoi(toks[2]);
    } else if (verb == "fold") {
        need(3);
        st.kind = Step::Kind::Fold;
        st.clause_id = std::stoi(toks[1]);
        st.name = toks[2];
    } else if (verb == "diff") {
        need(3);
        st.kind = Step::Kind::Diff;
        st.clause_id = std::stoi(toks[1]);
        size_t i = 2;
        while (i < toks.size() && toks[i] != "pairs" && toks[i] != "order")
            st.def_names.push_back(toks[i++]);
        while (i < toks.size()) {
            if (toks[i] == "pairs") {
                need(i + 2);
                std::string spec = toks[i + 1];
                // c.i:j,c.i:j
                std::string cur;
                for (char ch : spec + ",") {
                    if (ch == ',') {
                        auto dot = cur.find('.');
                        auto colon = cur.find(':');
                        st.pairs.push_back({std::stoi(cur.substr(0, dot)),
                                            std::stoi(cur.substr(dot + 1, colon - dot - 1)),
                                            std::stoi(cur.substr(colon + 1))});
                        cur.clear();
                    } else {
                        cur += ch;
                    }
                }
                i += 2;
            } else if (toks[i] == "order") {
                need(i + 2);
                std::string spec = toks[i + 1];
                std::string cur;
                for (char ch : spec + "/") {
                    if (ch == '/') {
                        st.orders.push_back(parse_int_list(cur));
                        cur.clear();
                    } else {
                        cur += ch;
                    }
                }
                i += 2;
            } else {
                throw TransformError("malformed diff step: " + s);
            }
        }
    } else if (verb == "subst") {
        need(2);
        st.kind = Step::Kind::Subst;
        st.clause_id = std::stoi(toks[1]);
        for (size_t i = 2; i < toks.size(); i++) st.subst_vars.push_back(toks[i]);
    } else if (verb == "tidy") {
        need(2);
        st.kind = Step::Kind::Tidy;
        st.clause_id = std::stoi(toks[1]);
    } else if (verb == "merge") {
        need(4);
        st.kind = Step::Kind::Merge;
        st.clause_id = std::stoi(toks[1]);
        st.atom_i = std::stoi(toks[2]);
        st.atom_j = std::stoi(toks[3]);
    } else if (verb == "split") {
        need(3);
        st.kind = Step::Kind::Split;
        st.clause_id = std::stoi(toks[1]);
        st.item_index = std::stoi(toks[2]);
    } else if (verb == "drop") {
        need(3);
        st.kind = Step::Kind::Drop;
        st.clause_id = std::stoi(toks[1]);
        std::string what = toks[2];
        st.drop_atom = what[0] == 'a';
        st.item_index = std::stoi(what.substr(1));
    } else if (verb == "weaken") {
        need(3);
        st.kind = Step::Kind::Weaken;
        st.clause_id = std::stoi(toks[1]);
        st.name = toks[2];
        if (toks.size() >= 5 && toks[3] == "fresh")
            st.fresh_positions = parse_int_list(toks[4]);
    } else if (verb == "inst") {
        need(4);
        st.kind = Step::Kind::Inst;
        st.clause_id = std::stoi(toks[1]);
        st.inst_var = toks[2];
        st.inst_value = toks[3];
    } else if (verb == "prune") {
        need(2);
        st.kind = Step::Kind::Prune;
        st.clause_id = std::stoi(toks[1]);
    } else {
        throw TransformError("unknown step verb: " + verb);
    }
    return st;
}

std::vector<Step> parse_script(const std::string& text, const Program& p) {
    std::vector<Step> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        auto st = parse_step(line, p);
        if (st) out.push_back(std::move(*st));
    }
    return out;
}

// --- session basics ---

const Definition* Session::find_def(const std::string& name) const {
    for (auto& d : defs)
        if (d.name == name) return &d;
    return nullptr;
}

const Clause& Session::clause(int id) const {
    const Clause* c = prog.find_clause(id);
    if (!c) throw TransformError("unknown clause id " + std::to_string(id));
    return *c;
}

std::string Session::fresh_new_name() {
    std::string n;
    do {
        n = "new" + std::to_string(next_new++);
    } while (prog.find_decl(n));
    return n;
}

std::string Session::fresh_diff_name() {
    std::string n;
    do {
        n = "diff" + std::to_string(next_diff++);
    } while (prog.find_decl(n));
    return n;
}

Clause Session::rename_def_apart(const Definition& d, const std::set<std::string>& avoid,
                                 Substitution* renaming) {
    auto [renamed, ren] = rename_apart(d.def_clause, avoid, rename_counter);
    if (renaming) *renaming = ren;
    return renamed;
}

bool Session::clause_is_tautology(const Clause& c) const {
    if (!c.head) return false;
    for (auto* a : c.atoms())
        if (atom_equal(*a, *c.head)) return true;
    return false;
}

bool Session::clause_is_duplicate(const Clause& c) const {
    for (auto& other : prog.clauses)
        if (other.id != c.id && clause_variant(other, c)) return true;
    return false;
}

// --- define ---

Definition& Session::define(const std::string& name, std::optional<Atom> head,
                            std::vector<BodyItem> body) {
    bool has_atom = false;
    for (auto& it : body) has_atom |= std::holds_alternative<Atom>(it);
    if (!has_atom) throw TransformError("define: body has no atoms");
    if (prog.find_decl(name)) throw TransformError("define: name in use: " + name);

    // base variables of the body in order of first occurrence
    std::vector<std::pair<std::string, Sort>> raw;
    for (auto& it : body) {
        if (auto* cc = std::get_if<Constraint>(&it))
            constraint_vars(*cc, raw);
        else
            for (auto& t : std::get<Atom>(it).args) term_vars(t, raw);
    }
    std::vector<std::pair<std::string, Sort>> base;
    std::set<std::string> seen;
    for (auto& [v, s] : raw)
        if (s != Sort::List && seen.insert(v).second) base.emplace_back(v, s);

    Atom h;
    if (head) {
        h = *head;
        if (h.args.size() != base.size())
            throw TransformError("define: head args must be the base variables of the body");
        std::set<std::string> names;
        for (auto& t : h.args) {
            if (!t->is_var() || !seen.count(t->name) || !names.insert(t->name).second)
                throw TransformError("define: head args must be the base variables of the body");
            for (auto& [v, s] : base)
                if (v == t->name && s != t->var_sort)
                    throw TransformError("define: head arg sort mismatch");
        }
        h.pred = name;
    } else {
        h.pred = name;
        for (auto& [v, s] : base) h.args.push_back(Term::var(v, s));
    }

    PredDecl d;
    d.name = name;
    for (auto& t : h.args) d.arg_sorts.push_back(t->var_sort);
    d.modes = introduced_modes(h.args, body, prog);
    d.modes_declared = true;
    prog.add_decl(d);

    Clause c;
    c.head = h;
    c.body = std::move(body);
    dedup_constraints(c);
    int id = prog.add_clause(c);

    Definition def;
    def.name = name;
    def.def_clause = *prog.find_clause(id);
    def.clause_id = id;
    def.introduced_at = (int)trace.size();
    defs.push_back(def);

    record("define " + atom_to_string(h) + " :- " +
           clause_to_string(prog.clauses[prog.clause_index(id)]).substr(
               atom_to_string(h).size() + 4));
    return defs.back();
}

// --- unfold ---

std::vector<int> Session::unfold(int clause_id, int atom_index) {
    const Clause target = clause(clause_id);
    auto atoms = target.atoms();
    if (atom_index < 1 || atom_index > (int)atoms.size())
        throw TransformError("unfold: atom index out of range");
    const Atom sel = *atoms[atom_index - 1];
    int sel_pos = target.atom_pos(atom_index);

    std::vector<const Clause*> defsOf = prog.defining_clauses(sel.pred);
    if (defsOf.empty()) throw TransformError("unfold: no defining clauses for " + sel.pred);

    std::set<std::string> avoid = target.var_names();
    std::vector<Clause> results;
    for (auto* dc0 : defsOf) {
        auto [dc, ren] = rename_apart(*dc0, avoid, rename_counter);
        auto u = unify_args(sel.args, dc.head->args);
        if (!u.ok()) continue;

        // orient the mgu: list bindings and def-side variables are applied;
        // an integer/boolean binding of a target variable becomes an
        // emitted equality constraint
        std::set<std::string> def_vars;
        for (auto& [v, s] : dc.vars()) def_vars.insert(v);

        Substitution apply_subst;
        std::vector<Constraint> emitted;
        // def-side variables bound to target vars re-orient; when several
        // target variables share one definition variable, the extras become
        // emitted equalities
        std::map<std::string, std::string> reoriented;
        for (auto& [v, t] : u.mgu.map) {
            if (def_vars.count(v)) {
                apply_subst.bind(v, t);
                continue;
            }
            // target-side variable
            Sort s = t->sort();
            if (t->is_var() && def_vars.count(t->name)) {
                auto it = reoriented.find(t->name);
                if (it == reoriented.end()) {
                    // prefer keeping the target's name
                    reoriented[t->name] = v;
                    apply_subst.bind(t->name, Term::var(v, s));
                } else if (s == Sort::List) {
                    apply_subst.bind(v, Term::var(it->second, s));
                } else if (s == Sort::Bool) {
                    emitted.push_back(Constraint::bool_cmp(CmpOp::Eq, Term::var(v, s),
                                                           Term::var(it->second, s)));
                } else {
                    emitted.push_back(Constraint::int_cmp(CmpOp::Eq, Expr::variable(v),
                                                          Expr::variable(it->second)));
                }
            } else if (s == Sort::List) {
                apply_subst.bind(v, t);
            } else if (t->is_var()) {
                // target var = target var: keep both, emit the equality
                if (s == Sort::Bool)
                    emitted.push_back(Constraint::bool_cmp(CmpOp::Eq, Term::var(v, s), t));
                else
                    emitted.push_back(Constraint::int_cmp(CmpOp::Eq, Expr::variable(v),
                                                          Expr::variable(t->name)));
            } else {
                // target var = constant
                if (s == Sort::Bool)
                    emitted.push_back(Constraint::bool_cmp(CmpOp::Eq, Term::var(v, s), t));
                else
                    emitted.push_back(Constraint::int_cmp(CmpOp::Eq, Expr::variable(v),
                                                          Expr::constant(t->ival)));
            }
        }

        // saturate so re-oriented variables are resolved inside images
        for (int pass = 0; pass < 3; pass++)
            for (auto& [v, t] : apply_subst.map) t = apply_subst.apply(t);

        Clause res;
        res.head = target.head ? std::optional<Atom>(apply_subst.apply(*target.head))
                               : std::nullopt;
        for (size_t i = 0; i < target.body.size(); i++) {
            if ((int)i == sel_pos) {
                for (auto& it : dc.body) res.body.push_back(apply_subst.apply(it));
                continue;
            }
            res.body.push_back(apply_subst.apply(target.body[i]));
        }
        for (auto& e : emitted) res.body.push_back(apply_subst.apply(e));
        dedup_constraints(res);

        std::vector<Constraint> cs;
        for (auto* cc : res.constraints()) cs.push_back(*cc);
        if (constraint_sat(cs) == SatVerdict::Unsat) continue;
        results.push_back(std::move(res));
    }

    record("unfold " + std::to_string(clause_id) + " " + std::to_string(atom_index));
    int first_new = prog.next_clause_id;
    prog.replace_clause(clause_id, std::move(results));
    std::vector<int> ids;
    for (int id = first_new; id < prog.next_clause_id; id++) ids.push_back(id);
    return ids;
}

// --- fold ---

namespace {

bool match_oneway(const TermPtr& pat, const TermPtr& t, Substitution& s) {
    switch (pat->kind) {
        case Term::Kind::Var: {
            auto img = s.lookup(pat->name);
            if (img) return term_equal(img, t);
            if (pat->var_sort != t->sort()) return false;
            s.bind(pat->name, t);
            return true;
        }
        case Term::Kind::IntConst:
            return t->kind == Term::Kind::IntConst && t->ival == pat->ival;
        case Term::Kind::BoolConst:
            return t->kind == Term::Kind::BoolConst && t->bval == pat->bval;
        case Term::Kind::Nil: return t->kind == Term::Kind::Nil;
        case Term::Kind::Cons:
            return t->kind == Term::Kind::Cons && match_oneway(pat->head, t->head, s) &&
                   match_oneway(pat->tail, t->tail, s);
    }
    return false;
}

// Extends `s` so that the def constraint becomes (up to normalization) the
// target constraint. Unbound def variables are matched against target
// variables with equal coefficients.
bool match_lin(const LinForm& pat_bound, const std::map<std::string, long long>& unbound,
               const LinForm& target, Substitution& s,
               const std::map<std::string, Sort>& target_sorts) {
    LinForm residual = target;
    residual.add(pat_bound, -1);
    std::vector<std::pair<std::string, long long>> todo(unbound.begin(), unbound.end());
    std::function<bool(size_t, LinForm)> go = [&](size_t i, LinForm res) -> bool {
        if (i == todo.size()) {
            // all coefficients and the constant must cancel
            if (res.constant != 0 || !res.coeffs.empty()) return false;
            return true;
        }
        auto [dv, dc] = todo[i];
        for (auto& [tv, tc] : res.coeffs) {
            if (tc != dc) continue;
            LinForm next = res;
            next.coeffs.erase(tv);
            Substitution saved = s;
            auto sit = target_sorts.find(tv);
            Sort so = sit == target_sorts.end() ? Sort::Int : sit->second;
            s.bind(dv, Term::var(tv, so));
            if (go(i + 1, next)) return true;
            s = saved;
        }
        return false;
    };
    return go(0, residual);
}

bool match_constraint(const Constraint& dc, const Constraint& tc, Substitution& s,
                      const std::map<std::string, Sort>& target_sorts) {
    NormConstraint nd = normalize(s.apply(dc));
    NormConstraint nt = normalize(tc);
    if (nd.boolean != nt.boolean) return false;
    if (nd.boolean) {
        // operands are var names or #t/#f; unbound def vars may bind
        if (nd.op != nt.op) return false;
        auto try_bind = [&](const std::string& d, const std::string& t,
                            Substitution& sub) {
            if (d == t) return true;
            if (d == "#t" || d == "#f") return false;
            // d must be an unbound def var (bound ones were substituted)
            if (sub.binds(d)) return false;
            TermPtr img;
            if (t == "#t")
                img = Term::bool_const(true);
            else if (t == "#f")
                img = Term::bool_const(false);
            else
                img = Term::var(t, Sort::Bool);
            sub.bind(d, img);
            return true;
        };
        Substitution s1 = s;
        if (try_bind(nd.b1, nt.b1, s1) && try_bind(nd.b2, nt.b2, s1)) {
            s = s1;
            return true;
        }
        Substitution s2 = s;
        if (try_bind(nd.b1, nt.b2, s2) && try_bind(nd.b2, nt.b1, s2)) {
            s = s2;
            return true;
        }
        return false;
    }
    if (nd.op != nt.op) return false;
    // split the def form into bound part and unbound variables
    LinForm bound;
    bound.constant = nd.form.constant;
    std::map<std::string, long long> unbound;
    for (auto& [v, c] : nd.form.coeffs) {
        if (s.binds(v))
            bound.coeffs[v] = c;  // cannot happen: s was applied already
        else
            unbound[v] = c;
    }
    // all remaining vars in nd are either target vars (already substituted in)
    // or unbound def vars; target vars stay in `bound`
    bound.coeffs.clear();
    std::map<std::string, long long> unbound2;
    for (auto& [v, c] : nd.form.coeffs) {
        if (target_sorts.count(v))
            bound.coeffs[v] = c;
        else
            unbound2[v] = c;
    }
    if (unbound2.empty()) return nd == nt;
    if (match_lin(bound, unbound2, nt.form, s, target_sorts)) return true;
    if (nd.op == NormOp::Le) return false;
    // equalities and disequalities also match with the opposite sign
    LinForm neg_target;
    neg_target.add(nt.form, -1);
    LinForm neg_bound;
    neg_bound.add(bound, -1);
    neg_bound.constant = -nd.form.constant;
    std::map<std::string, long long> neg_unbound;
    for (auto& [v, c] : unbound2) neg_unbound[v] = -c;
    (void)neg_bound;
    LinForm bound_in_neg = bound;  // compare -def against target instead
    LinForm negdef;
    negdef.add(bound, -1);
    negdef.constant -= nd.form.constant;
    return match_lin(negdef, neg_unbound, nt.form, s, target_sorts);
}

}  // namespace

struct FoldMatch {
    Substitution theta;
    std::vector<int> matched_atom_positions;  // 1-based atom indices in target
};

// Searches for a fold match of def's body inside target's body. The local
// variable condition is skipped for generalizing folds that discard the rest
// of the body.
static std::optional<FoldMatch> find_fold_match(const Clause& target, const Clause& def,
                                                bool check_locals = true) {
    auto t_atoms = target.atoms();
    auto d_atoms = def.atoms();
    if (d_atoms.empty()) return std::nullopt;

    std::map<std::string, Sort> target_sorts;
    for (auto& [v, s] : target.vars()) target_sorts[v] = s;
    std::set<std::string> head_vars;
    for (auto& t : def.head->args)
        if (t->is_var()) head_vars.insert(t->name);

    std::vector<NormConstraint> target_norms;
    for (auto* c : target.constraints()) target_norms.push_back(normalize(*c));

    std::vector<int> used(t_atoms.size(), 0);
    std::vector<int> chosen(d_atoms.size(), -1);

    std::optional<FoldMatch> result;
    std::function<bool(size_t, Substitution)> go2 = [&](size_t i, Substitution s) -> bool {
        if (i == d_atoms.size()) {
            Substitution s2 = s;
            for (auto* dc : def.constraints()) {
                // instances that hold outright need no counterpart
                if (norm_trivially_true(normalize(s2.apply(*dc)))) continue;
                bool ok = false;
                for (auto* tc : target.constraints()) {
                    Substitution s3 = s2;
                    if (match_constraint(*dc, *tc, s3, target_sorts)) {
                        s2 = s3;
                        ok = true;
                        break;
                    }
                }
                if (!ok) {
                    // an equality with a single unbound unit variable can be
                    // satisfied by instantiating that variable
                    Constraint inst = s2.apply(*dc);
                    if (!inst.boolean && inst.op == CmpOp::Eq) {
                        NormConstraint n = normalize(inst);
                        std::string solo;
                        long long coeff = 0;
                        int unbound_count = 0;
                        for (auto& [v, c] : n.form.coeffs) {
                            if (target_sorts.count(v)) continue;
                            unbound_count++;
                            solo = v;
                            coeff = c;
                        }
                        if (unbound_count == 1 && (coeff == 1 || coeff == -1)) {
                            LinForm rest = n.form;
                            rest.coeffs.erase(solo);
                            if (coeff == 1) {
                                LinForm neg;
                                neg.add(rest, -1);
                                rest = neg;
                            }
                            if (rest.coeffs.empty()) {
                                s2.bind(solo, Term::int_const(rest.constant));
                                ok = true;
                            } else if (rest.coeffs.size() == 1 && rest.constant == 0 &&
                                       rest.coeffs.begin()->second == 1) {
                                s2.bind(solo, Term::var(rest.coeffs.begin()->first, Sort::Int));
                                ok = true;
                            }
                        }
                    }
                }
                if (!ok) return false;
            }
            std::set<std::string> outside;
            auto collect = [&](const TermPtr& t) {
                std::vector<std::pair<std::string, Sort>> vs;
                term_vars(t, vs);
                for (auto& [v, so] : vs) outside.insert(v);
            };
            if (target.head)
                for (auto& t : target.head->args) collect(t);
            for (size_t k = 0; k < t_atoms.size(); k++) {
                if (used[k]) continue;
                for (auto& t : t_atoms[k]->args) collect(t);
            }
            for (auto* tc : target.constraints()) {
                std::vector<std::pair<std::string, Sort>> vs;
                constraint_vars(*tc, vs);
                for (auto& [v, so] : vs) outside.insert(v);
            }
            std::set<std::string> local_images;
            for (auto& [v, img] : s2.map) {
                if (!check_locals) break;
                if (head_vars.count(v)) continue;
                if (!img->is_var()) return false;
                if (outside.count(img->name)) return false;
                if (!local_images.insert(img->name).second) return false;
            }
            FoldMatch fm;
            fm.theta = s2;
            for (size_t i2 = 0; i2 < d_atoms.size(); i2++)
                fm.matched_atom_positions.push_back(chosen[i2] + 1);
            result = std::move(fm);
            return true;
        }
        for (size_t j = 0; j < t_atoms.size(); j++) {
            if (used[j] || t_atoms[j]->pred != d_atoms[i]->pred ||
                t_atoms[j]->args.size() != d_atoms[i]->args.size())
                continue;
            Substitution s2 = s;
            bool ok = true;
            for (size_t a = 0; ok && a < d_atoms[i]->args.size(); a++)
                ok = match_oneway(d_atoms[i]->args[a], t_atoms[j]->args[a], s2);
            if (!ok) continue;
            used[j] = 1;
            chosen[i] = (int)j;
            if (go2(i + 1, s2)) return true;
            used[j] = 0;
            chosen[i] = -1;
        }
        return false;
    };
    go2(0, Substitution{});
    return result;
}

FoldResult Session::fold(int clause_id, const std::string& def_name) {
    const Definition* d = find_def(def_name);
    if (!d) throw TransformError("fold: unknown definition " + def_name);
    const Clause target = clause(clause_id);
    std::set<std::string> avoid = target.var_names();
    Clause def = rename_def_apart(*d, avoid);

    auto fm = find_fold_match(target, def);
    FoldResult res;
    if (!fm) return res;

    // remove the matched atoms and place the instantiated head at the first
    std::set<int> matched(fm->matched_atom_positions.begin(),
                          fm->matched_atom_positions.end());
    int first = *std::min_element(fm->matched_atom_positions.begin(),
                                  fm->matched_atom_positions.end());
    Clause out;
    out.head = target.head;
    int atom_no = 0;
    for (auto& it : target.body) {
        if (std::holds_alternative<Atom>(it)) {
            atom_no++;
            if (matched.count(atom_no)) {
                if (atom_no == first) out.body.push_back(fm->theta.apply(*def.head));
                continue;
            }
        }
        out.body.push_back(it);
    }
    dedup_constraints(out);
    record("fold " + std::to_string(clause_id) + " " + def_name);
    prog.replace_clause(clause_id, {out});
    res.applied = true;
    res.new_clause_id = prog.next_clause_id - 1;
    return res;
}

// --- auxiliary steps ---

void Session::subst(int clause_id, const std::vector<std::string>& vars) {
    Clause* c = prog.find_clause(clause_id);
    if (!c) throw TransformError("subst: unknown clause " + std::to_string(clause_id));
    std::set<std::string> only(vars.begin(), vars.end());

    auto head_order = [&](const std::string& v) -> int {
        auto vs = c->vars();
        for (size_t i = 0; i < vs.size(); i++)
            if (vs[i].first == v) return (int)i;
        return (int)vs.size();
    };
    std::set<std::string> head_vars;
    if (c->head)
        for (auto& t : c->head->args)
            if (t->is_var()) head_vars.insert(t->name);

    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < c->body.size(); i++) {
            auto* cc = std::get_if<Constraint>(&c->body[i]);
            if (!cc || cc->op != CmpOp::Eq) continue;
            std::string victim;
            TermPtr image;
            if (cc->boolean) {
                bool lv = cc->blhs->is_var(), rv = cc->brhs->is_var();
                if (lv && rv) {
                    auto pick = [&](const std::string& a, const std::string& b) {
                        // prefer eliminating a listed var, then a non-head var,
                        // then the later one
                        bool ea = only.empty() || only.count(a);
                        bool eb = only.empty() || only.count(b);
                        if (ea != eb) return ea ? a : b;
                        if (!ea) return std::string();
                        bool ha = head_vars.count(a), hb = head_vars.count(b);
                        if (ha != hb) return ha ? b : a;
                        return head_order(a) >= head_order(b) ? a : b;
                    };
                    victim = pick(cc->blhs->name, cc->brhs->name);
                    if (victim.empty()) continue;
                    image = victim == cc->blhs->name ? cc->brhs : cc->blhs;
                } else if (lv || rv) {
                    victim = lv ? cc->blhs->name : cc->brhs->name;
                    if (!only.empty() && !only.count(victim)) continue;
                    image = lv ? cc->brhs : cc->blhs;
                } else {
                    continue;
                }
            } else {
                NormConstraint n = normalize(*cc);
                if (n.form.coeffs.size() == 1) {
                    auto& [v, k] = *n.form.coeffs.begin();
                    if (k != 1 && k != -1) continue;
                    if (!only.empty() && !only.count(v)) continue;
                    victim = v;
                    long long value = k == 1 ? -n.form.constant : n.form.constant;
                    image = Term::int_const(value);
                } else if (n.form.coeffs.size() == 2 && n.form.constant == 0) {
                    auto it = n.form.coeffs.begin();
                    auto [v1, k1] = *it++;
                    auto [v2, k2] = *it;
                    if (!((k1 == 1 && k2 == -1) || (k1 == -1 && k2 == 1))) continue;
                    auto pick = [&](const std::string& a, const std::string& b) {
                        bool ea = only.empty() || only.count(a);
                        bool eb = only.empty() || only.count(b);
                        if (ea != eb) return ea ? a : b;
                        if (!ea) return std::string();
                        bool ha = head_vars.count(a), hb = head_vars.count(b);
                        if (ha != hb) return ha ? b : a;
                        return head_order(a) >= head_order(b) ? a : b;
                    };
                    victim = pick(v1, v2);
                    if (victim.empty()) continue;
                    image = Term::var(victim == v1 ? v2 : v1, Sort::Int);
                } else {
                    continue;
                }
            }
            Substitution s;
            s.bind(victim, image);
            Clause next;
            next.id = c->id;
            next.head = c->head ? std::optional<Atom>(s.apply(*c->head)) : std::nullopt;
            for (size_t k = 0; k < c->body.size(); k++) {
                if (k == i) continue;  // the used equality disappears
                next.body.push_back(s.apply(c->body[k]));
            }
            *c = std::move(next);
            changed = true;
            break;
        }
    }
    // drop constraints that became trivially true
    std::vector<BodyItem> out;
    for (auto& it : c->body) {
        if (auto* cc = std::get_if<Constraint>(&it))
            if (norm_trivially_true(normalize(*cc))) continue;
        out.push_back(it);
    }
    c->body = std::move(out);
    dedup_constraints(*c);

    std::string line = "subst " + std::to_string(clause_id);
    for (auto& v : vars) line += " " + v;
    record(line);
}

void Session::tidy(int clause_id) {
    Clause* c = prog.find_clause(clause_id);
    if (!c) throw TransformError("tidy: unknown clause " + std::to_string(clause_id));
    std::vector<BodyItem> out;
    for (auto& it : c->body) {
        if (auto* cc = std::get_if<Constraint>(&it))
            if (norm_trivially_true(normalize(*cc))) continue;
        out.push_back(it);
    }
    c->body = std::move(out);
    record("tidy " + std::to_string(clause_id));
}

void Session::merge(int clause_id, int atom_i, int atom_j) {
    Clause* c = prog.find_clause(clause_id);
    if (!c) throw TransformError("merge: unknown clause " + std::to_string(clause_id));
    auto atoms = c->atoms();
    if (atom_i < 1 || atom_j < 1 || atom_i > (int)atoms.size() ||
        atom_j > (int)atoms.size() || atom_i == atom_j)
        throw TransformError("merge: bad atom indices");
    const Atom a = *atoms[atom_i - 1];
    const Atom b = *atoms[atom_j - 1];
    if (a.pred != b.pred) throw TransformError("merge: different predicates");
    const PredDecl* d = prog.find_decl(a.pred);
    if (!d) throw TransformError("merge: unknown predicate " + a.pred);
    std::vector<Constraint> new_eqs;
    for (size_t p = 0; p < a.args.size(); p++) {
        if (d->modes[p] == Mode::In) {
            if (!term_equal(a.args[p], b.args[p]))
                throw TransformError("merge: input arguments differ");
        } else if (!term_equal(a.args[p], b.args[p])) {
            if (d->arg_sorts[p] == Sort::List)
                throw TransformError("merge: list outputs cannot be merged");
            if (d->arg_sorts[p] == Sort::Bool)
                new_eqs.push_back(Constraint::bool_cmp(CmpOp::Eq, b.args[p], a.args[p]));
            else {
                auto to_expr = [](const TermPtr& t) {
                    return t->is_var() ? Expr::variable(t->name) : Expr::constant(t->ival);
                };
                new_eqs.push_back(
                    Constraint::int_cmp(CmpOp::Eq, to_expr(b.args[p]), to_expr(a.args[p])));
            }
        }
    }
    int pos = c->atom_pos(atom_j);
    c->body.erase(c->body.begin() + pos);
    for (auto& e : new_eqs) c->body.push_back(e);
    dedup_constraints(*c);
    record("merge " + std::to_string(clause_id) + " " + std::to_string(atom_i) + " " +
           std::to_string(atom_j));
}

std::vector<int> Session::split(int clause_id, int constraint_index) {
    const Clause target = clause(clause_id);
    auto cs = target.constraints();
    if (constraint_index < 1 || constraint_index > (int)cs.size())
        throw TransformError("split: bad constraint index");
    const Constraint sel = *cs[constraint_index - 1];
    if (sel.boolean || sel.op != CmpOp::Ne)
        throw TransformError("split: only integer disequalities can be split");
    int pos = target.constraint_pos(constraint_index);

    Clause lt = target, gt = target;
    lt.body[pos] = Constraint::int_cmp(CmpOp::Lt, sel.lhs, sel.rhs);
    gt.body[pos] = Constraint::int_cmp(CmpOp::Gt, sel.lhs, sel.rhs);
    record("split " + std::to_string(clause_id) + " " + std::to_string(constraint_index));
    prog.replace_clause(clause_id, {lt, gt});
    return {prog.next_clause_id - 2, prog.next_clause_id - 1};
}

void Session::drop(int clause_id, bool is_atom, int index) {
    Clause* c = prog.find_clause(clause_id);
    if (!c) throw TransformError("drop: unknown clause " + std::to_string(clause_id));
    int pos = is_atom ? c->atom_pos(index) : c->constraint_pos(index);
    if (pos < 0) throw TransformError("drop: bad index");
    c->body.erase(c->body.begin() + pos);
    record("drop " + std::to_string(clause_id) + " " + (is_atom ? "a" : "c") +
           std::to_string(index));
}

int Session::weaken(int clause_id, const std::string& def_name,
                    const std::vector<int>& fresh_positions) {
    const Definition* d = find_def(def_name);
    if (!d) throw TransformError("weaken: unknown definition " + def_name);
    const Clause target = clause(clause_id);
    Clause def = rename_def_apart(*d, target.var_names());

    auto fm = find_fold_match(target, def, false);
    if (!fm) throw TransformError("weaken: definition body does not match");
    Atom head = fm->theta.apply(*def.head);
    for (int p : fresh_positions) {
        if (p < 1 || p > (int)head.args.size())
            throw TransformError("weaken: bad fresh position");
        Sort s = head.args[p - 1]->sort();
        std::string base = def.head->args[p - 1]->is_var() ? def.head->args[p - 1]->name : "V";
        head.args[p - 1] = Term::var(base + "_" + std::to_string(++rename_counter), s);
    }
    Clause out;
    out.head = target.head;
    out.body.push_back(head);
    std::string line = "weaken " + std::to_string(clause_id) + " " + def_name;
    if (!fresh_positions.empty()) {
        line += " fresh ";
        for (size_t i = 0; i < fresh_positions.size(); i++) {
            if (i) line += ",";
            line += std::to_string(fresh_positions[i]);
        }
    }
    record(line);
    prog.replace_clause(clause_id, {out});
    return prog.next_clause_id - 1;
}

int Session::instance(int clause_id, const std::string& var, const std::string& value) {
    const Clause target = clause(clause_id);
    Sort sort = Sort::Int;
    bool found = false;
    for (auto& [v, so] : target.vars())
        if (v == var) {
            sort = so;
            found = true;
        }
    if (!found) throw TransformError("inst: unknown variable " + var);
    Substitution s;
    if (value == "true" || value == "false") {
        if (sort != Sort::Bool) throw TransformError("inst: sort mismatch");
        s.bind(var, Term::bool_const(value == "true"));
    } else {
        if (sort != Sort::Int) throw TransformError("inst: sort mismatch");
        s.bind(var, Term::int_const(std::stoll(value)));
    }
    Clause copy = s.apply(target);
    int id = prog.add_clause(copy);
    record("inst " + std::to_string(clause_id) + " " + var + " " + value);
    return id;
}

void Session::prune(int clause_id) {
    const Clause c = clause(clause_id);
    std::vector<Constraint> cs;
    for (auto* cc : c.constraints()) cs.push_back(*cc);
    bool ok = constraint_sat(cs) == SatVerdict::Unsat || clause_is_tautology(c) ||
              clause_is_duplicate(c);
    if (!ok && c.head) {
        // clauses of predicates the goals cannot reach may also go
        std::set<std::string> reach;
        std::vector<std::string> todo;
        auto note = [&](const Clause& cl) {
            for (auto* a : cl.atoms())
                if (reach.insert(a->pred).second) todo.push_back(a->pred);
        };
        for (auto& cl : prog.clauses)
            if (!cl.head) note(cl);
        while (!todo.empty()) {
            std::string pred = todo.back();
            todo.pop_back();
            for (auto& cl : prog.clauses)
                if (cl.head && cl.head->pred == pred) note(cl);
        }
        ok = !reach.count(c.head->pred);
    }
    if (!ok) throw TransformError("prune: clause " + std::to_string(clause_id) +
                                  " is neither unsatisfiable, a tautology, a duplicate, "
                                  "nor unreachable from the goals");
    record("prune " + std::to_string(clause_id));
    prog.remove_clause(clause_id);
}

void Session::apply(const Step& s) {
    switch (s.kind) {
        case Step::Kind::Define: define(s.name, s.def_head, s.def_body); break;
        case Step::Kind::Unfold: unfold(s.clause_id, s.atom_index); break;
        case Step::Kind::Fold: {
            auto r = fold(s.clause_id, s.name);
            if (!r.applied) throw TransformError("fold not applicable");
            break;
        }
        case Step::Kind::Diff: diff(s.clause_id, s.def_names, s.pairs, s.orders); break;
        case Step::Kind::Subst: subst(s.clause_id, s.subst_vars); break;
        case Step::Kind::Tidy: tidy(s.clause_id); break;
        case Step::Kind::Merge: merge(s.clause_id, s.atom_i, s.atom_j); break;
        case Step::Kind::Split: split(s.clause_id, s.item_index); break;
        case Step::Kind::Drop: drop(s.clause_id, s.drop_atom, s.item_index); break;
        case Step::Kind::Weaken: weaken(s.clause_id, s.name, s.fresh_positions); break;
        case Step::Kind::Inst: instance(s.clause_id, s.inst_var, s.inst_value); break;
        case Step::Kind::Prune: prune(s.clause_id); break;
    }
}

Session replay(Program p, const std::vector<Step>& script) {
    Session ses(std::move(p));
    for (size_t i = 0; i < script.size(); i++) {
        try {
            ses.apply(script[i]);
        } catch (const std::exception& e) {
            throw StepFailed((int)i, e.what());
        }
    }
    return ses;
}

}  // namespace chc
