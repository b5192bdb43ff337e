#include "chc/diffpred.hpp"

#include <algorithm>
#include <functional>

namespace chc {

bool find_embedding(const Clause& target, const Clause& def_clause) {
    auto t_atoms = target.atoms();
    for (auto* da : def_clause.atoms()) {
        bool found = false;
        for (auto* ta : t_atoms)
            if (atom_variant(*da, *ta)) {
                found = true;
                break;
            }
        if (!found) return false;
    }
    return !def_clause.atoms().empty();
}

namespace {

// one-way match that only binds def-copy variables
bool bind_oneway(const TermPtr& pat, const TermPtr& t, Substitution& s,
                 const std::set<std::string>& def_vars) {
    TermPtr p = s.apply(pat);
    if (p->is_var() && def_vars.count(p->name)) {
        if (p->var_sort != t->sort()) return false;
        s.bind(p->name, t);
        return true;
    }
    if (p->is_var() || t->is_var()) return p->is_var() && t->is_var() && p->name == t->name;
    if (p->kind != t->kind) return false;
    switch (p->kind) {
        case Term::Kind::IntConst: return p->ival == t->ival;
        case Term::Kind::BoolConst: return p->bval == t->bval;
        case Term::Kind::Nil: return true;
        case Term::Kind::Cons:
            return bind_oneway(p->head, t->head, s, def_vars) &&
                   bind_oneway(p->tail, t->tail, s, def_vars);
        default: return false;
    }
}

}  // namespace

std::optional<Matching> match_definitions(const Clause& target,
                                          const std::vector<Clause>& copies,
                                          const Program& prog,
                                          const std::vector<std::array<int, 3>>& forced) {
    Matching m;
    std::set<std::string> def_vars;
    for (auto& c : copies) {
        Matching::Copy mc;
        mc.renamed = c;
        m.copies.push_back(std::move(mc));
        for (auto& [v, s] : c.vars()) def_vars.insert(v);
    }

    auto t_atoms = target.atoms();
    std::vector<int> target_used(t_atoms.size(), 0);

    // attempt to pair definition atom (ci, di) with target atom tj
    auto try_pair = [&](int ci, int di, int tj, bool force) -> bool {
        auto& copy = m.copies[ci];
        auto d_atoms = copy.renamed.atoms();
        const Atom& da = *d_atoms[di];
        const Atom& ta = *t_atoms[tj];
        if (da.pred != ta.pred || da.args.size() != ta.args.size()) return false;
        const PredDecl* decl = prog.find_decl(da.pred);
        if (!decl) return false;
        // inputs one position at a time; kept even when the pair fails
        for (size_t p = 0; p < da.args.size(); p++) {
            if (decl->modes[p] != Mode::In) continue;
            if (!bind_oneway(da.args[p], ta.args[p], m.sigma, def_vars)) return false;
        }
        // outputs only once all inputs agree; a failed output binding also
        // fails the pair (bindings made so far are kept)
        for (size_t p = 0; p < da.args.size(); p++) {
            if (decl->modes[p] != Mode::Out) continue;
            if (!bind_oneway(da.args[p], ta.args[p], m.sigma, def_vars)) return false;
        }
        copy.matched_def.push_back(di + 1);
        copy.matched_target.push_back(tj + 1);
        target_used[tj] = 1;
        (void)force;
        return true;
    };

    std::set<std::pair<int, int>> forced_def;  // (copy, def atom) with forced pairs
    for (auto& [c, d, t] : forced) {
        if (c < 1 || c > (int)copies.size()) return std::nullopt;
        auto d_atoms = m.copies[c - 1].renamed.atoms();
        if (d < 1 || d > (int)d_atoms.size() || t < 1 || t > (int)t_atoms.size())
            return std::nullopt;
        if (target_used[t - 1]) return std::nullopt;
        if (!try_pair(c - 1, d - 1, t - 1, true)) return std::nullopt;
        forced_def.insert({c - 1, d - 1});
    }

    for (size_t ci = 0; ci < m.copies.size(); ci++) {
        auto d_atoms = m.copies[ci].renamed.atoms();
        for (size_t di = 0; di < d_atoms.size(); di++) {
            if (forced_def.count({(int)ci, (int)di})) continue;
            bool already = false;
            for (int k : m.copies[ci].matched_def) already |= (k == (int)di + 1);
            if (already) continue;
            for (size_t tj = 0; tj < t_atoms.size(); tj++) {
                if (target_used[tj]) continue;
                if (forced.empty()) {
                    if (try_pair((int)ci, (int)di, (int)tj, false)) break;
                } else {
                    // with explicit pairs, the remaining atoms only contribute
                    // input bindings; no further pairs are added
                    auto& da = *d_atoms[di];
                    auto& ta = *t_atoms[tj];
                    if (da.pred != ta.pred || da.args.size() != ta.args.size()) continue;
                    const PredDecl* decl = prog.find_decl(da.pred);
                    if (!decl) continue;
                    for (size_t p = 0; p < da.args.size(); p++) {
                        if (decl->modes[p] != Mode::In) continue;
                        if (!bind_oneway(da.args[p], ta.args[p], m.sigma, def_vars)) break;
                    }
                }
            }
        }
    }

    bool any = false;
    for (auto& c : m.copies) any |= !c.matched_def.empty();
    if (!any) return std::nullopt;

    for (size_t tj = 0; tj < t_atoms.size(); tj++)
        if (!target_used[tj]) m.target_mismatch.push_back((int)tj + 1);
    for (auto& copy : m.copies) {
        auto d_atoms = copy.renamed.atoms();
        for (size_t di = 0; di < d_atoms.size(); di++) {
            bool matched = false;
            for (int k : copy.matched_def) matched |= (k == (int)di + 1);
            if (!matched) copy.mismatch.push_back(m.sigma.apply(*d_atoms[di]));
        }
    }
    return m;
}

// --- Session::diff: the six-step introduction ---

Session::DiffOutcome Session::diff(int clause_id, const std::vector<std::string>& def_names,
                                   const std::vector<std::array<int, 3>>& pairs,
                                   const std::vector<std::vector<int>>& orders) {
    const Clause target = clause(clause_id);
    if (def_names.empty()) throw TransformError("diff: no definitions given");

    // Steps 1-2: embedding check and renaming apart
    std::set<std::string> avoid = target.var_names();
    std::vector<Clause> copies;
    for (auto& name : def_names) {
        const Definition* d = find_def(name);
        if (!d) throw TransformError("diff: unknown definition " + name);
        const Clause& dc = d->def_clause;
        if (!dc.constraints().empty())
            throw TransformError("diff: definitions with constraints are not supported");
        if (!find_embedding(target, dc))
            throw TransformError("diff: definition " + name + " is not embedded in clause " +
                                 std::to_string(clause_id));
        Clause renamed = rename_def_apart(*d, avoid);
        for (auto& [v, s] : renamed.vars()) avoid.insert(v);
        copies.push_back(std::move(renamed));
    }

    // Step 3: matching
    auto m = match_definitions(target, copies, prog, pairs);
    if (!m) throw TransformError("diff: no admissible matching");

    auto t_atoms = target.atoms();
    bool have_target_mm = !m->target_mismatch.empty();
    bool have_def_mm = false;
    for (auto& c : m->copies) have_def_mm |= !c.mismatch.empty();
    if (!have_target_mm || !have_def_mm)
        throw TransformError("diff: matching has an empty mismatching conjunction");

    // Step 4: group the mismatch atoms into components connected by shared
    // list variables
    struct MMAtom {
        Atom atom;
        bool target_side;
        int target_index = -1;  // for target-side atoms
    };
    std::vector<MMAtom> mm;
    for (int idx : m->target_mismatch)
        mm.push_back({*t_atoms[idx - 1], true, idx});
    for (auto& c : m->copies)
        for (auto& a : c.mismatch) mm.push_back({a, false, -1});

    auto list_vars_of = [](const Atom& a) {
        std::set<std::string> out;
        std::vector<std::pair<std::string, Sort>> vs;
        for (auto& t : a.args) term_vars(t, vs);
        for (auto& [v, s] : vs)
            if (s == Sort::List) out.insert(v);
        return out;
    };
    std::vector<int> comp(mm.size());
    for (size_t i = 0; i < mm.size(); i++) comp[i] = (int)i;
    std::function<int(int)> find = [&](int x) {
        return comp[x] == x ? x : comp[x] = find(comp[x]);
    };
    for (size_t i = 0; i < mm.size(); i++)
        for (size_t j = i + 1; j < mm.size(); j++) {
            auto vi = list_vars_of(mm[i].atom);
            auto vj = list_vars_of(mm[j].atom);
            bool share = false;
            for (auto& v : vi) share |= vj.count(v) > 0;
            if (share) comp[find((int)i)] = find((int)j);
        }
    std::vector<std::vector<int>> components;  // atom indices into mm
    std::map<int, int> root_to_comp;
    for (size_t i = 0; i < mm.size(); i++) {
        int r = find((int)i);
        if (!root_to_comp.count(r)) {
            root_to_comp[r] = (int)components.size();
            components.push_back({});
        }
        components[root_to_comp[r]].push_back((int)i);
    }

    DiffOutcome outcome;
    std::vector<Atom> diff_heads;

    for (size_t k = 0; k < components.size(); k++) {
        auto& idxs = components[k];
        // component body: linking constraints, then target-side atoms in
        // target order, then definition-side atoms
        std::set<std::string> comp_vars;
        for (int i : idxs) {
            std::vector<std::pair<std::string, Sort>> vs;
            for (auto& t : mm[i].atom.args) term_vars(t, vs);
            for (auto& [v, s] : vs) comp_vars.insert(v);
        }
        std::vector<BodyItem> body;
        for (auto* tc : target.constraints()) {
            std::vector<std::pair<std::string, Sort>> vs;
            constraint_vars(*tc, vs);
            if (vs.empty()) continue;
            bool all_in = true;
            for (auto& [v, s] : vs) all_in &= comp_vars.count(v) > 0;
            if (all_in) body.push_back(*tc);
        }
        for (int i : idxs)
            if (mm[i].target_side) body.push_back(mm[i].atom);
        for (int i : idxs)
            if (!mm[i].target_side) body.push_back(mm[i].atom);

        // head arguments: base variables by first occurrence, then the
        // requested permutation
        std::vector<std::pair<std::string, Sort>> raw;
        for (auto& it : body) {
            if (auto* cc = std::get_if<Constraint>(&it))
                constraint_vars(*cc, raw);
            else
                for (auto& t : std::get<Atom>(it).args) term_vars(t, raw);
        }
        std::vector<TermPtr> args;
        std::set<std::string> seen;
        for (auto& [v, s] : raw)
            if (s != Sort::List && seen.insert(v).second) args.push_back(Term::var(v, s));
        if (k < orders.size() && !orders[k].empty()) {
            if (orders[k].size() != args.size())
                throw TransformError("diff: order hint has wrong length");
            std::vector<TermPtr> permuted;
            for (int pos : orders[k]) {
                if (pos < 1 || pos > (int)args.size())
                    throw TransformError("diff: order hint out of range");
                permuted.push_back(args[pos - 1]);
            }
            args = std::move(permuted);
        }

        std::string diff_name = fresh_diff_name();
        Atom head;
        head.pred = diff_name;
        head.args = args;

        PredDecl decl;
        decl.name = diff_name;
        for (auto& t : args) decl.arg_sorts.push_back(t->var_sort);
        // outputs: variables at Out positions of target-side mismatch atoms
        for (auto& t : args) {
            Mode mode = Mode::In;
            for (int i : idxs) {
                if (!mm[i].target_side) continue;
                const PredDecl* pd = prog.find_decl(mm[i].atom.pred);
                if (!pd) continue;
                for (size_t p = 0; p < mm[i].atom.args.size(); p++)
                    if (pd->modes[p] == Mode::Out && mm[i].atom.args[p]->is_var() &&
                        mm[i].atom.args[p]->name == t->name)
                        mode = Mode::Out;
            }
            decl.modes.push_back(mode);
        }
        decl.modes_declared = true;
        prog.add_decl(decl);

        Clause def_clause;
        def_clause.head = head;
        def_clause.body = body;
        dedup_constraints(def_clause);
        int def_id = prog.add_clause(def_clause);

        Definition def;
        def.name = diff_name;
        def.def_clause = *prog.find_clause(def_id);
        def.clause_id = def_id;
        def.introduced_at = (int)trace.size();
        defs.push_back(def);

        outcome.diff_names.push_back(diff_name);
        outcome.def_clause_ids.push_back(def_id);
        diff_heads.push_back(head);
    }

    // Step 5: replace the target mismatching atoms by the definition-side
    // mismatching atoms plus the difference heads
    std::set<int> removed(m->target_mismatch.begin(), m->target_mismatch.end());
    Clause replaced;
    replaced.head = target.head;
    int atom_no = 0;
    for (auto& it : target.body) {
        if (std::holds_alternative<Atom>(it)) {
            atom_no++;
            if (removed.count(atom_no)) continue;
        }
        replaced.body.push_back(it);
    }
    for (auto& c : m->copies)
        for (auto& a : c.mismatch) replaced.body.push_back(a);
    for (auto& h : diff_heads) replaced.body.push_back(h);

    // Step 6: fold with each copy; by construction every copy's sigma-applied
    // body is present
    Clause folded = replaced;
    for (auto& c : m->copies) {
        std::vector<Atom> want;
        for (auto* da : c.renamed.atoms()) want.push_back(m->sigma.apply(*da));
        // remove the first occurrence of each; head goes to the position of
        // the first removed atom
        std::vector<BodyItem> next;
        int first_pos = -1;
        std::vector<bool> taken(want.size(), false);
        int pos = 0;
        for (auto& it : folded.body) {
            bool consumed = false;
            if (auto* a = std::get_if<Atom>(&it)) {
                for (size_t w = 0; w < want.size(); w++) {
                    if (taken[w] || !atom_equal(want[w], *a)) continue;
                    taken[w] = true;
                    consumed = true;
                    if (first_pos < 0) first_pos = pos;
                    break;
                }
            }
            if (!consumed) {
                next.push_back(it);
                pos++;
            }
        }
        for (bool t : taken)
            if (!t) throw TransformError("diff: fold residue after replacement");
        Atom folded_head = m->sigma.apply(*c.renamed.head);
        next.insert(next.begin() + (first_pos < 0 ? (int)next.size() : first_pos),
                    folded_head);
        folded.body = std::move(next);
    }
    dedup_constraints(folded);

    std::string line = "diff " + std::to_string(clause_id);
    for (auto& n : def_names) line += " " + n;
    if (!pairs.empty()) {
        line += " pairs ";
        for (size_t i = 0; i < pairs.size(); i++) {
            if (i) line += ",";
            line += std::to_string(pairs[i][0]) + "." + std::to_string(pairs[i][1]) + ":" +
                    std::to_string(pairs[i][2]);
        }
    }
    if (!orders.empty()) {
        line += " order ";
        for (size_t i = 0; i < orders.size(); i++) {
            if (i) line += "/";
            for (size_t j = 0; j < orders[i].size(); j++) {
                if (j) line += ",";
                line += std::to_string(orders[i][j]);
            }
        }
    }
    record(line);
    prog.replace_clause(clause_id, {folded});
    outcome.folded_clause_id = prog.next_clause_id - 1;
    return outcome;
}

}  // namespace chc
