#include "chc/driver.hpp"

#include "chc/diffpred.hpp"

#include <algorithm>
#include <deque>

namespace chc {

std::set<std::string> reachable_preds(const Program& p) {
    std::set<std::string> reach;
    std::deque<std::string> todo;
    auto note_atoms = [&](const Clause& c) {
        for (auto* a : c.atoms())
            if (reach.insert(a->pred).second) todo.push_back(a->pred);
    };
    for (auto& c : p.clauses)
        if (!c.head) note_atoms(c);
    while (!todo.empty()) {
        std::string pred = todo.front();
        todo.pop_front();
        for (auto& c : p.clauses)
            if (c.head && c.head->pred == pred) note_atoms(c);
    }
    return reach;
}

int unfold_selection(const Clause& c, const Program& p,
                     const std::vector<const Clause*>& def_clauses,
                     int self_def_clause_id) {
    for (auto* d : def_clauses) {
        if (d->id == c.id || d->id == self_def_clause_id) continue;
        if (find_embedding(c, *d)) return 0;
    }
    auto atoms = c.atoms();
    // atoms whose list argument already exposes a constructor
    for (size_t i = 0; i < atoms.size(); i++) {
        if (p.defining_clauses(atoms[i]->pred).empty()) continue;
        for (auto& t : atoms[i]->args)
            if (t->sort() == Sort::List && term_has_constructor(t)) return (int)i + 1;
    }
    // the leftmost atom consuming an In-mode list variable nothing produces
    std::set<std::string> produced;
    for (auto* a : atoms) {
        const PredDecl* d = p.find_decl(a->pred);
        if (!d) continue;
        for (size_t j = 0; j < a->args.size(); j++)
            if (d->modes[j] == Mode::Out && a->args[j]->is_var() &&
                a->args[j]->var_sort == Sort::List)
                produced.insert(a->args[j]->name);
    }
    for (size_t i = 0; i < atoms.size(); i++) {
        const PredDecl* d = p.find_decl(atoms[i]->pred);
        if (!d || p.defining_clauses(atoms[i]->pred).empty()) continue;
        for (size_t j = 0; j < atoms[i]->args.size(); j++) {
            auto& t = atoms[i]->args[j];
            if (d->modes[j] == Mode::In && t->is_var() && t->var_sort == Sort::List &&
                !produced.count(t->name))
                return (int)i + 1;
        }
    }
    return 0;
}

namespace {

bool program_list_free(const Program& p) { return !p.has_list_syntax(); }

struct AutoDriver {
    Session& ses;
    int budget;

    bool spend() { return --budget >= 0; }

    std::vector<const Clause*> def_clauses() const {
        std::vector<const Clause*> out;
        for (auto& d : ses.defs) out.push_back(&d.def_clause);
        return out;
    }

    // how many copies of the definition can match disjoint target atoms
    int copy_estimate(const Clause& target, const Clause& def) {
        int best = 1 << 20;
        for (auto* da : def.atoms()) {
            int n = 0;
            for (auto* ta : target.atoms())
                if (atom_variant(*da, *ta)) n++;
            best = std::min(best, n);
        }
        return std::max(1, std::min(best, 2));
    }

    // returns false when the budget is exhausted
    bool process_definition(const std::string& name, std::deque<std::string>& worklist) {
        const Definition* def = ses.find_def(name);
        if (!def) return true;
        std::deque<int> pending{def->clause_id};
        int self_clause = def->clause_id;

        while (!pending.empty()) {
            int cid = pending.front();
            pending.pop_front();
            const Clause* c = ses.prog.find_clause(cid);
            if (!c || !c->has_list_var()) continue;

            int sel = unfold_selection(*c, ses.prog, def_clauses(),
                                       cid == self_clause ? self_clause : -1);
            if (sel > 0) {
                if (!spend()) return false;
                auto ids = ses.unfold(cid, sel);
                for (int id : ids) {
                    ses.subst(id, {});
                    pending.push_back(id);
                }
                continue;
            }

            // fold as long as something applies
            bool changed = true;
            bool folded_any = false;
            while (changed) {
                changed = false;
                const Clause* cur = ses.prog.find_clause(cid);
                if (!cur || !cur->has_list_var()) break;
                for (auto& d : ses.defs) {
                    if (d.clause_id == cid) continue;
                    if (!spend()) return false;
                    auto r = ses.fold(cid, d.name);
                    if (r.applied) {
                        cid = r.new_clause_id;
                        changed = true;
                        folded_any = true;
                        break;
                    }
                }
            }
            const Clause* cur = ses.prog.find_clause(cid);
            if (!cur || !cur->has_list_var()) continue;

            if (ses.clause_is_tautology(*cur) || ses.clause_is_duplicate(*cur)) {
                if (!spend()) return false;
                ses.prune(cid);
                continue;
            }

            // blocked: difference introduction if some definition embeds
            bool handled = false;
            for (auto& d : ses.defs) {
                const Clause* dc = &d.def_clause;
                if (d.clause_id == cid || !dc->head) continue;
                if (!dc->constraints().empty()) continue;
                if (!find_embedding(*cur, *dc)) continue;
                int k = copy_estimate(*cur, *dc);
                std::vector<std::string> names(k, d.name);
                try {
                    if (!spend()) return false;
                    auto out = ses.diff(cid, names, {}, {});
                    pending.push_back(out.folded_clause_id);
                    for (auto& dn : out.diff_names) worklist.push_back(dn);
                    handled = true;
                    break;
                } catch (const TransformError&) {
                    continue;
                }
            }
            if (handled) continue;

            // no embedding: introduce a fresh predicate for the atom part
            std::vector<BodyItem> body;
            for (auto* a : cur->atoms()) body.push_back(*a);
            if (body.empty()) continue;  // lists only in the head: nothing to do
            if (!spend()) return false;
            std::string nn = ses.fresh_new_name();
            ses.define(nn, std::nullopt, body);
            if (!spend()) return false;
            auto r = ses.fold(cid, nn);
            if (!r.applied) return true;  // leaves the clause; caller reports Stuck
            worklist.push_back(nn);
        }
        return true;
    }

    bool run() {
        // seed: goal clauses with list variables get a definition and a fold
        std::deque<std::string> worklist;
        std::vector<int> goals;
        for (auto& c : ses.prog.clauses)
            if (!c.head && c.has_list_var()) goals.push_back(c.id);
        for (int gid : goals) {
            const Clause& g = ses.clause(gid);
            std::vector<BodyItem> body;
            for (auto* a : g.atoms()) body.push_back(*a);
            if (body.empty()) continue;
            if (!spend()) return false;
            std::string nn = ses.fresh_new_name();
            ses.define(nn, std::nullopt, body);
            if (!spend()) return false;
            ses.fold(gid, nn);
            worklist.push_back(nn);
        }
        while (!worklist.empty()) {
            std::string name = worklist.front();
            worklist.pop_front();
            if (!process_definition(name, worklist)) return false;
        }
        return true;
    }
};

void gc_unreachable(Session& ses) {
    auto reach = reachable_preds(ses.prog);
    std::vector<int> doomed;
    for (auto& c : ses.prog.clauses)
        if (c.head && !reach.count(c.head->pred)) doomed.push_back(c.id);
    for (int id : doomed) ses.prune(id);
}

}  // namespace

ElimResult eliminate(Program p, int budget, const std::vector<Step>* hints) {
    ElimResult res;
    Session ses(std::move(p));

    if (hints) {
        for (size_t i = 0; i < hints->size(); i++) {
            try {
                ses.apply((*hints)[i]);
            } catch (const std::exception& e) {
                throw StepFailed((int)i, e.what());
            }
        }
        gc_unreachable(ses);
        res.program = ses.prog;
        res.trace = ses.trace;
        res.status = program_list_free(res.program) ? ElimStatus::Success : ElimStatus::Stuck;
        if (res.status == ElimStatus::Stuck) {
            for (auto& c : res.program.clauses)
                if (c.has_list_var()) {
                    res.blocking_clause = c.id;
                    break;
                }
            res.message = "hint script left list syntax behind";
        }
        return res;
    }

    if (program_list_free(ses.prog)) {
        res.program = ses.prog;
        res.status = ElimStatus::Success;
        return res;
    }

    AutoDriver drv{ses, budget};
    bool within_budget = drv.run();
    if (within_budget) gc_unreachable(ses);
    res.program = ses.prog;
    res.trace = ses.trace;
    if (!within_budget) {
        res.status = ElimStatus::BudgetExhausted;
        res.message = "budget exhausted";
        return res;
    }
    if (program_list_free(res.program)) {
        res.status = ElimStatus::Success;
        return res;
    }
    res.status = ElimStatus::Stuck;
    for (auto& c : res.program.clauses)
        if (c.has_list_var()) {
            res.blocking_clause = c.id;
            break;
        }
    res.message = "no rule applies";
    return res;
}

}  // namespace chc
