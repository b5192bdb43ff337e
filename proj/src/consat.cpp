#include "chc/consat.hpp"

#include <algorithm>
#include <limits>

namespace chc {

namespace {

constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

// union-find with parity for boolean (dis)equalities
struct ParityUF {
    std::vector<int> parent;
    std::vector<int> parity;  // relative to parent

    int make() {
        parent.push_back((int)parent.size());
        parity.push_back(0);
        return (int)parent.size() - 1;
    }
    std::pair<int, int> find(int x) {
        if (parent[x] == x) return {x, 0};
        auto [r, p] = find(parent[x]);
        parent[x] = r;
        parity[x] ^= p;
        return {r, parity[x]};
    }
    // returns false on contradiction
    bool join(int a, int b, int rel) {
        auto [ra, pa] = find(a);
        auto [rb, pb] = find(b);
        if (ra == rb) return (pa ^ pb) == rel;
        parent[ra] = rb;
        parity[ra] = pa ^ pb ^ rel;
        return true;
    }
};

bool eval_norm(const NormConstraint& n,
               const std::map<std::string, long long>& ints,
               const std::map<std::string, bool>& bools) {
    if (n.boolean) {
        auto val = [&](const std::string& k) {
            if (k == "#t") return true;
            if (k == "#f") return false;
            return bools.at(k);
        };
        bool eq = val(n.b1) == val(n.b2);
        return n.op == NormOp::Eq ? eq : !eq;
    }
    long long v = n.form.constant;
    for (auto& [var, c] : n.form.coeffs) v += c * ints.at(var);
    switch (n.op) {
        case NormOp::Eq: return v == 0;
        case NormOp::Ne: return v != 0;
        case NormOp::Le: return v <= 0;
    }
    return false;
}

}  // namespace

SatVerdict constraint_sat(const std::vector<const Constraint*>& cs) {
    std::vector<NormConstraint> norm;
    norm.reserve(cs.size());
    for (auto* c : cs) norm.push_back(normalize(*c));

    for (auto& n : norm)
        if (norm_trivially_false(n)) return SatVerdict::Unsat;

    // booleans: parity union-find, with a virtual true/false pair
    {
        ParityUF uf;
        std::map<std::string, int> node;
        auto get = [&](const std::string& k) {
            auto it = node.find(k);
            if (it != node.end()) return it->second;
            int n = uf.make();
            node[k] = n;
            return n;
        };
        int t = get("#t"), f = get("#f");
        if (!uf.join(t, f, 1)) return SatVerdict::Unsat;
        for (auto& n : norm) {
            if (!n.boolean) continue;
            if (!uf.join(get(n.b1), get(n.b2), n.op == NormOp::Eq ? 0 : 1))
                return SatVerdict::Unsat;
        }
    }

    // integers: difference bounds over constraints with at most two unit vars
    std::vector<std::string> vars;
    std::map<std::string, int> vid;
    auto var_id = [&](const std::string& v) {
        auto it = vid.find(v);
        if (it != vid.end()) return it->second;
        vid[v] = (int)vars.size();
        vars.push_back(v);
        return (int)vars.size() - 1;
    };
    for (auto& n : norm)
        if (!n.boolean)
            for (auto& [v, c] : n.form.coeffs) var_id(v);

    int nv = (int)vars.size() + 1;  // node 0 is the zero reference
    std::vector<std::vector<long long>> dist(nv, std::vector<long long>(nv, kInf));
    for (int i = 0; i < nv; i++) dist[i][i] = 0;
    auto add_edge = [&](int from, int to, long long w) {
        dist[from][to] = std::min(dist[from][to], w);
    };

    // x - y <= c  becomes edge y -> x with weight c (so dist[y][x] bounds x-y)
    auto difference_shape = [&](const LinForm& f, int& x, int& y, long long& c) {
        if (f.coeffs.size() == 1) {
            auto& [v, k] = *f.coeffs.begin();
            if (k == 1) {
                x = var_id(v) + 1;
                y = 0;
                c = -f.constant;
                return true;
            }
            if (k == -1) {
                x = 0;
                y = var_id(v) + 1;
                c = -f.constant;
                return true;
            }
            return false;
        }
        if (f.coeffs.size() == 2) {
            auto it = f.coeffs.begin();
            auto [v1, k1] = *it++;
            auto [v2, k2] = *it;
            if (k1 == 1 && k2 == -1) {
                x = var_id(v1) + 1;
                y = var_id(v2) + 1;
                c = -f.constant;
                return true;
            }
            if (k1 == -1 && k2 == 1) {
                x = var_id(v2) + 1;
                y = var_id(v1) + 1;
                c = -f.constant;
                return true;
            }
        }
        return false;
    };

    for (auto& n : norm) {
        if (n.boolean) continue;
        int x, y;
        long long c;
        if (!difference_shape(n.form, x, y, c)) continue;
        // form: x - y - c  op  0
        switch (n.op) {
            case NormOp::Le: add_edge(y, x, c); break;
            case NormOp::Eq:
                add_edge(y, x, c);
                add_edge(x, y, -c);
                break;
            case NormOp::Ne: break;
        }
    }

    // Floyd-Warshall closure
    for (int k = 0; k < nv; k++)
        for (int i = 0; i < nv; i++) {
            if (dist[i][k] == kInf) continue;
            for (int j = 0; j < nv; j++) {
                if (dist[k][j] == kInf) continue;
                long long d = dist[i][k] + dist[k][j];
                if (d < dist[i][j]) dist[i][j] = d;
            }
        }
    for (int i = 0; i < nv; i++)
        if (dist[i][i] < 0) return SatVerdict::Unsat;

    // disequalities forced into equality by the bounds
    for (auto& n : norm) {
        if (n.boolean || n.op != NormOp::Ne) continue;
        int x, y;
        long long c;
        if (!difference_shape(n.form, x, y, c)) continue;
        if (dist[y][x] <= c && dist[x][y] <= -c) return SatVerdict::Unsat;
    }

    // witness search over a small box
    std::set<std::string> bvars;
    for (auto& n : norm) {
        if (!n.boolean) continue;
        if (n.b1 != "#t" && n.b1 != "#f") bvars.insert(n.b1);
        if (n.b2 != "#t" && n.b2 != "#f") bvars.insert(n.b2);
    }
    if (vars.size() <= 4 && bvars.size() <= 4) {
        std::vector<std::string> bv(bvars.begin(), bvars.end());
        std::map<std::string, long long> ints;
        std::map<std::string, bool> bools;
        std::function<bool(size_t)> try_bool = [&](size_t bi) -> bool {
            if (bi == bv.size()) {
                for (auto& n : norm)
                    if (!eval_norm(n, ints, bools)) return false;
                return true;
            }
            for (bool val : {false, true}) {
                bools[bv[bi]] = val;
                if (try_bool(bi + 1)) return true;
            }
            return false;
        };
        std::function<bool(size_t)> try_int = [&](size_t vi) -> bool {
            if (vi == vars.size()) return try_bool(0);
            for (long long v = -8; v <= 8; v++) {
                ints[vars[vi]] = v;
                if (try_int(vi + 1)) return true;
            }
            return false;
        };
        if (try_int(0)) return SatVerdict::Sat;
        // exhausted the box without a witness: keep the clause
        return SatVerdict::Unknown;
    }
    return SatVerdict::Unknown;
}

SatVerdict constraint_sat(const std::vector<Constraint>& cs) {
    std::vector<const Constraint*> ps;
    ps.reserve(cs.size());
    for (auto& c : cs) ps.push_back(&c);
    return constraint_sat(ps);
}

}  // namespace chc
