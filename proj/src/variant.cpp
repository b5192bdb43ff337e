#include "chc/variant.hpp"
#include "chc/linform.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace chc {

namespace {

struct Bij {
    std::map<std::string, std::string> fwd, bwd;

    bool map_to(const std::string& a, const std::string& b) {
        auto f = fwd.find(a);
        auto g = bwd.find(b);
        if (f == fwd.end() && g == bwd.end()) {
            fwd[a] = b;
            bwd[b] = a;
            return true;
        }
        return f != fwd.end() && g != bwd.end() && f->second == b && g->second == a;
    }
};

bool term_match(const TermPtr& a, const TermPtr& b, Bij& vb) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Term::Kind::Var:
            return a->var_sort == b->var_sort && vb.map_to(a->name, b->name);
        case Term::Kind::IntConst: return a->ival == b->ival;
        case Term::Kind::BoolConst: return a->bval == b->bval;
        case Term::Kind::Nil: return true;
        case Term::Kind::Cons:
            return term_match(a->head, b->head, vb) && term_match(a->tail, b->tail, vb);
    }
    return false;
}

bool atom_match(const Atom& a, const Atom& b, Bij& vb, Bij& pb) {
    if (a.args.size() != b.args.size()) return false;
    if (!pb.map_to(a.pred, b.pred)) return false;
    for (size_t i = 0; i < a.args.size(); i++)
        if (!term_match(a.args[i], b.args[i], vb)) return false;
    return true;
}

// Matches two normalized linear forms under a (partial) variable bijection.
bool lin_match(const LinForm& a, const LinForm& b, Bij& vb) {
    if (a.constant != b.constant || a.coeffs.size() != b.coeffs.size()) return false;
    std::vector<std::pair<std::string, long long>> av(a.coeffs.begin(), a.coeffs.end());
    std::function<bool(size_t, LinForm)> go = [&](size_t i, LinForm rem) -> bool {
        if (i == av.size()) return rem.coeffs.empty();
        auto [v, c] = av[i];
        auto f = vb.fwd.find(v);
        if (f != vb.fwd.end()) {
            auto it = rem.coeffs.find(f->second);
            if (it == rem.coeffs.end() || it->second != c) return false;
            LinForm next = rem;
            next.coeffs.erase(f->second);
            return go(i + 1, next);
        }
        for (auto& [w, d] : rem.coeffs) {
            if (d != c || vb.bwd.count(w)) continue;
            Bij saved = vb;
            if (!vb.map_to(v, w)) {
                vb = saved;
                continue;
            }
            LinForm next = rem;
            next.coeffs.erase(w);
            if (go(i + 1, next)) return true;
            vb = saved;
        }
        return false;
    };
    return go(0, b);
}

bool norm_match(const NormConstraint& a, const NormConstraint& b, Bij& vb) {
    if (a.boolean != b.boolean || a.op != b.op) return false;
    if (a.boolean) {
        auto op_match = [&](const std::string& x, const std::string& y, Bij& bij) {
            if (x == "#t" || x == "#f") return x == y;
            if (y == "#t" || y == "#f") return false;
            return bij.map_to(x, y);
        };
        Bij saved = vb;
        if (op_match(a.b1, b.b1, vb) && op_match(a.b2, b.b2, vb)) return true;
        vb = saved;
        if (op_match(a.b1, b.b2, vb) && op_match(a.b2, b.b1, vb)) return true;
        vb = saved;
        return false;
    }
    Bij saved = vb;
    if (lin_match(a.form, b.form, vb)) return true;
    vb = saved;
    if (a.op != NormOp::Le) {
        LinForm neg;
        neg.add(b.form, -1);
        if (lin_match(a.form, neg, vb)) return true;
        vb = saved;
    }
    return false;
}

bool clause_match(const Clause& a, const Clause& b, Bij& pb) {
    if (a.head.has_value() != b.head.has_value()) return false;
    auto a_atoms = a.atoms();
    auto b_atoms = b.atoms();
    if (a_atoms.size() != b_atoms.size()) return false;
    std::vector<NormConstraint> a_cs, b_cs;
    for (auto* c : a.constraints()) a_cs.push_back(normalize(*c));
    for (auto* c : b.constraints()) b_cs.push_back(normalize(*c));
    if (a_cs.size() != b_cs.size()) return false;

    Bij vb;
    Bij pb_in = pb;
    if (a.head && !atom_match(*a.head, *b.head, vb, pb)) {
        pb = pb_in;
        return false;
    }

    std::vector<int> used(b_atoms.size(), 0);
    std::vector<int> cused(b_cs.size(), 0);
    std::function<bool(size_t)> match_cs = [&](size_t i) -> bool {
        if (i == a_cs.size()) return true;
        for (size_t j = 0; j < b_cs.size(); j++) {
            if (cused[j]) continue;
            Bij saved = vb;
            if (norm_match(a_cs[i], b_cs[j], vb)) {
                cused[j] = 1;
                if (match_cs(i + 1)) return true;
                cused[j] = 0;
            }
            vb = saved;
        }
        return false;
    };
    std::function<bool(size_t)> match_atoms = [&](size_t i) -> bool {
        if (i == a_atoms.size()) return match_cs(0);
        for (size_t j = 0; j < b_atoms.size(); j++) {
            if (used[j]) continue;
            Bij v_saved = vb;
            Bij p_saved = pb;
            if (atom_match(*a_atoms[i], *b_atoms[j], vb, pb)) {
                used[j] = 1;
                if (match_atoms(i + 1)) return true;
                used[j] = 0;
            }
            vb = v_saved;
            pb = p_saved;
        }
        return false;
    };
    if (match_atoms(0)) return true;
    pb = pb_in;
    return false;
}

std::string clause_sig(const Clause& c) {
    std::ostringstream os;
    os << (c.head ? (int)c.head->args.size() : -1) << "/";
    std::vector<int> ar;
    for (auto* a : c.atoms()) ar.push_back((int)a->args.size());
    std::sort(ar.begin(), ar.end());
    for (int x : ar) os << x << ",";
    os << "/" << c.constraints().size();
    return os.str();
}

}  // namespace

bool clause_variant(const Clause& a, const Clause& b) {
    // identical predicate names required: seed the predicate bijection
    Bij pb;
    std::set<std::string> preds;
    auto note = [&](const Clause& c) {
        if (c.head) preds.insert(c.head->pred);
        for (auto* at : c.atoms()) preds.insert(at->pred);
    };
    note(a);
    note(b);
    for (auto& p : preds) pb.map_to(p, p);
    return clause_match(a, b, pb);
}

bool program_variant_equal(const Program& a, const Program& b,
                           std::map<std::string, std::string>* pred_map) {
    if (a.clauses.size() != b.clauses.size()) return false;
    std::vector<const Clause*> as, bs;
    for (auto& c : a.clauses) as.push_back(&c);
    for (auto& c : b.clauses) bs.push_back(&c);

    // candidates grouped by a name-free signature
    std::map<std::string, std::vector<int>> sig_to_b;
    for (size_t j = 0; j < bs.size(); j++) sig_to_b[clause_sig(*bs[j])].push_back((int)j);
    for (auto* c : as)
        if (!sig_to_b.count(clause_sig(*c))) return false;

    // order A clauses by fewest candidates first
    std::vector<int> order(as.size());
    for (size_t i = 0; i < as.size(); i++) order[i] = (int)i;
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        return sig_to_b[clause_sig(*as[x])].size() < sig_to_b[clause_sig(*as[y])].size();
    });

    std::vector<int> used(bs.size(), 0);
    Bij pb;
    std::function<bool(size_t)> go = [&](size_t k) -> bool {
        if (k == order.size()) return true;
        const Clause* ca = as[order[k]];
        for (int j : sig_to_b[clause_sig(*ca)]) {
            if (used[j]) continue;
            Bij saved = pb;
            if (clause_match(*ca, *bs[j], pb)) {
                used[j] = 1;
                if (go(k + 1)) return true;
                used[j] = 0;
            }
            pb = saved;
        }
        return false;
    };
    if (!go(0)) return false;
    if (pred_map) *pred_map = pb.fwd;
    return true;
}

std::string variant_diff_report(const Program& a, const Program& b) {
    std::ostringstream os;
    if (a.clauses.size() != b.clauses.size())
        os << "clause counts differ: " << a.clauses.size() << " vs " << b.clauses.size()
           << "\n";
    // greedy pairing to surface unmatched clauses
    std::vector<int> used(b.clauses.size(), 0);
    for (auto& ca : a.clauses) {
        bool matched = false;
        for (size_t j = 0; j < b.clauses.size() && !matched; j++) {
            if (used[j]) continue;
            Bij pb;
            // free predicate bijection per pair for reporting purposes
            if (clause_match(ca, b.clauses[j], pb)) {
                used[j] = 1;
                matched = true;
            }
        }
        if (!matched) os << "no candidate for: " << clause_to_string(ca) << "\n";
    }
    for (size_t j = 0; j < b.clauses.size(); j++)
        if (!used[j]) os << "unmatched on right: " << clause_to_string(b.clauses[j]) << "\n";
    return os.str();
}

}  // namespace chc
