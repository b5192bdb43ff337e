#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "chc/consat.hpp"
#include "chc/parser.hpp"
#include "chc/subst.hpp"

#include <functional>
#include <random>

using namespace chc;

namespace {

TermPtr ivar(const std::string& n) { return Term::var(n, Sort::Int); }
TermPtr lvar(const std::string& n) { return Term::var(n, Sort::List); }

TermPtr list_of(std::vector<long long> xs) {
    TermPtr t = Term::nil();
    for (auto it = xs.rbegin(); it != xs.rend(); ++it)
        t = Term::cons(Term::int_const(*it), t);
    return t;
}

Clause clause_from(const std::string& text, const std::string& decls) {
    Program p = parse_program(decls + "\n" + text);
    return p.clauses.at(0);
}

const char* kSortDecls =
    ":- pred ins(int,list(int),list(int)).\n"
    ":- pred insertionSort(list(int),list(int)).\n"
    ":- pred count(int,list(int),int).\n"
    ":- pred new1(int,int,int).\n"
    ":- pred diff1(int,int,int).\n"
    ":- pred p(int).\n"
    ":- pred q(list(int)).\n";

}  // namespace

TEST_CASE("unify decomposes lists structurally") {
    auto lhs = Term::cons(ivar("X"), lvar("Xs"));
    auto rhs = list_of({1, 2});
    auto r = unify(lhs, rhs);
    REQUIRE(r.ok());
    CHECK(term_equal(r.mgu.lookup("X"), Term::int_const(1)));
    CHECK(term_equal(r.mgu.lookup("Xs"), list_of({2})));
}

TEST_CASE("unify of a variable with itself is empty") {
    auto r = unify(ivar("X"), ivar("X"));
    REQUIRE(r.ok());
    CHECK(r.mgu.empty());
}

TEST_CASE("unify fails on constructor clash") {
    auto r = unify(Term::nil(), Term::cons(ivar("Y"), lvar("Ys")));
    CHECK(!r.ok());
    CHECK(r.status == UnifyStatus::Clash);
}

TEST_CASE("unify enforces the occurs check") {
    auto r = unify(lvar("Xs"), Term::cons(ivar("X"), lvar("Xs")));
    CHECK(r.status == UnifyStatus::OccursCheck);
}

TEST_CASE("unify rejects different sorts") {
    auto r = unify(ivar("X"), lvar("Y"));
    CHECK(r.status == UnifyStatus::SortMismatch);
}

TEST_CASE("rename_apart avoids the forbidden set and inverts cleanly") {
    Clause c = clause_from("p(X) :- X=<Y.", kSortDecls);
    int counter = 0;
    auto [renamed, ren] = rename_apart(c, {"X"}, counter);
    CHECK(renamed.head->args[0]->name != "X");
    bool saw_y = false;
    for (auto& [v, s] : renamed.vars()) saw_y |= v == "Y";
    CHECK(saw_y);
    Clause back = ren.inverse().apply(renamed);
    CHECK(clause_to_string(back) == clause_to_string(c));
}

TEST_CASE("rename_apart with no variables is the identity") {
    Clause c = clause_from("p(1).", kSortDecls);
    int counter = 0;
    auto [renamed, ren] = rename_apart(c, {"X", "Y"}, counter);
    CHECK(ren.empty());
    CHECK(clause_to_string(renamed) == "p(1).");
}

TEST_CASE("is_variant finds the renaming between atom lists") {
    Atom a{"insertionSort", {lvar("Xs"), lvar("S1")}};
    Atom b{"insertionSort", {lvar("La"), lvar("Sa")}};
    auto s = is_variant({a}, {b});
    REQUIRE(s.has_value());
    CHECK(s->lookup("Xs")->name == "La");
    CHECK(s->lookup("S1")->name == "Sa");
}

TEST_CASE("is_variant rejects non-injective patterns") {
    Atom a{"p", {ivar("X"), ivar("X")}};
    Atom b{"p", {ivar("A"), ivar("B")}};
    CHECK(!is_variant({a}, {b}).has_value());
    CHECK(is_variant({}, {}).has_value());
}

TEST_CASE("substitution composition is idempotent") {
    Substitution s;
    s.bind("X", ivar("Y"));
    Substitution t;
    t.bind("Y", Term::int_const(3));
    auto c = s.compose(t);
    CHECK(term_equal(c.apply(ivar("X")), Term::int_const(3)));
    auto twice = c.compose(c);
    for (auto& [v, img] : c.map) CHECK(term_equal(twice.apply(ivar(v)), img));
}

TEST_CASE("constraint_sat spots direct contradictions") {
    Program p = parse_program(std::string(kSortDecls) + "p(X) :- X=Y, X=\\=Y.");
    std::vector<Constraint> cs;
    for (auto* c : p.clauses[0].constraints()) cs.push_back(*c);
    CHECK(constraint_sat(cs) == SatVerdict::Unsat);
}

TEST_CASE("constraint_sat finds small witnesses") {
    Program p = parse_program(std::string(kSortDecls) + "p(N) :- N1=N+1, N>=0.");
    std::vector<Constraint> cs;
    for (auto* c : p.clauses[0].constraints()) cs.push_back(*c);
    CHECK(constraint_sat(cs) == SatVerdict::Sat);
}

TEST_CASE("constraint_sat rejects boolean clashes") {
    std::vector<Constraint> cs;
    cs.push_back(Constraint::bool_cmp(CmpOp::Eq, Term::var("B", Sort::Bool),
                                      Term::bool_const(true)));
    cs.push_back(Constraint::bool_cmp(CmpOp::Eq, Term::var("B", Sort::Bool),
                                      Term::bool_const(false)));
    CHECK(constraint_sat(cs) == SatVerdict::Unsat);
}

TEST_CASE("constraint_sat closes difference bounds through chains") {
    Program p = parse_program(std::string(kSortDecls) + "p(X) :- X>Y, Y>Z, Z>X.");
    std::vector<Constraint> cs;
    for (auto* c : p.clauses[0].constraints()) cs.push_back(*c);
    CHECK(constraint_sat(cs) == SatVerdict::Unsat);
}

TEST_CASE("partition_vars splits list and base variables") {
    Clause c = clause_from(
        "new1(X,N1,N2) :- insertionSort(L,S), count(X,L,N1), count(X,S,N2).", kSortDecls);
    auto part = partition_vars(c);
    CHECK(part.adt_vars == std::set<std::string>{"L", "S"});
    CHECK(part.base_vars == std::set<std::string>{"X", "N1", "N2"});

    Clause g = clause_from("p(1).", kSortDecls);
    auto pg = partition_vars(g);
    CHECK(pg.adt_vars.empty());
    CHECK(pg.base_vars.empty());

    Clause c15 = clause_from(
        "diff1(X,N2a,N2) :- ins(X,S1,S), count(X,S,N2), count(X,S1,N2a).", kSortDecls);
    auto p15 = partition_vars(c15);
    CHECK(p15.adt_vars == std::set<std::string>{"S1", "S"});
    CHECK(p15.base_vars == std::set<std::string>{"X", "N2a", "N2"});
}

// --- property tests with hand-rolled generators ---

namespace {

struct Gen {
    std::mt19937 rng;
    explicit Gen(unsigned seed) : rng(seed) {}
    int pick(int lo, int hi) { return (int)(rng() % (unsigned)(hi - lo + 1)) + lo; }

    TermPtr term(int depth, bool list, const std::vector<std::string>& vars) {
        if (list) {
            int k = pick(0, depth > 0 ? 2 : 1);
            if (k == 0) return Term::nil();
            if (k == 1) return Term::var(vars[pick(0, (int)vars.size() - 1)] + "l", Sort::List);
            return Term::cons(term(depth - 1, false, vars), term(depth - 1, true, vars));
        }
        int k = pick(0, 1);
        if (k == 0) return Term::int_const(pick(0, 1));
        return Term::var(vars[pick(0, (int)vars.size() - 1)], Sort::Int);
    }
};

void enum_assignments(const std::vector<std::pair<std::string, Sort>>& vars, size_t i,
                      Substitution& cur, const std::vector<TermPtr>& ints,
                      const std::vector<TermPtr>& lists,
                      const std::function<void(const Substitution&)>& yield) {
    if (i == vars.size()) {
        yield(cur);
        return;
    }
    auto& [v, s] = vars[i];
    for (auto& t : (s == Sort::Int ? ints : lists)) {
        cur.bind(v, t);
        enum_assignments(vars, i + 1, cur, ints, lists, yield);
    }
    cur.map.erase(v);
}

}  // namespace

TEST_CASE("unify agrees with a brute-force ground oracle") {
    Gen g(20240817);
    std::vector<TermPtr> ints = {Term::int_const(0), Term::int_const(1)};
    std::vector<TermPtr> lists;
    for (auto xs : std::vector<std::vector<long long>>{{}, {0}, {1}, {0, 1}, {1, 0}})
        lists.push_back(list_of(xs));

    for (int round = 0; round < 300; round++) {
        bool as_list = g.pick(0, 1) == 1;
        auto a = g.term(2, as_list, {"X", "Y"});
        auto b = g.term(2, as_list, {"X", "Z"});
        auto r = unify(a, b);

        std::vector<std::pair<std::string, Sort>> vars;
        term_vars(a, vars);
        term_vars(b, vars);
        std::sort(vars.begin(), vars.end());
        vars.erase(std::unique(vars.begin(), vars.end()), vars.end());

        bool ground_unifiable = false;
        Substitution cur;
        enum_assignments(vars, 0, cur, ints, lists, [&](const Substitution& s) {
            if (term_equal(s.apply(a), s.apply(b))) ground_unifiable = true;
        });

        if (r.ok()) {
            CHECK(term_equal(r.mgu.apply(a), r.mgu.apply(b)));
            for (auto& [v, img] : r.mgu.map)
                CHECK(term_equal(r.mgu.apply(img), img));
        } else {
            CHECK(!ground_unifiable);
        }
    }
}

TEST_CASE("constraint_sat never claims Unsat when a boxed witness exists") {
    Gen g(7);
    for (int round = 0; round < 400; round++) {
        std::vector<std::string> names = {"X", "Y", "Z"};
        int n = g.pick(1, 3);
        std::vector<Constraint> cs;
        for (int i = 0; i < n; i++) {
            CmpOp op = (CmpOp)g.pick(0, 5);
            auto side = [&]() -> ExprPtr {
                int k = g.pick(0, 2);
                if (k == 0) return Expr::constant(g.pick(-2, 2));
                if (k == 1) return Expr::variable(names[g.pick(0, 2)]);
                return Expr::add(Expr::variable(names[g.pick(0, 2)]),
                                 Expr::constant(g.pick(-2, 2)));
            };
            cs.push_back(Constraint::int_cmp(op, side(), side()));
        }
        auto verdict = constraint_sat(cs);
        if (verdict != SatVerdict::Unsat) continue;

        bool witness = false;
        for (long long x = -8; x <= 8 && !witness; x++)
            for (long long y = -8; y <= 8 && !witness; y++)
                for (long long z = -8; z <= 8 && !witness; z++) {
                    std::map<std::string, long long> env{{"X", x}, {"Y", y}, {"Z", z}};
                    std::function<long long(const ExprPtr&)> go =
                        [&](const ExprPtr& q) -> long long {
                        switch (q->kind) {
                            case Expr::Kind::Const: return q->value;
                            case Expr::Kind::Var: return env[q->var];
                            case Expr::Kind::Add: return go(q->lhs) + go(q->rhs);
                            case Expr::Kind::Sub: return go(q->lhs) - go(q->rhs);
                            case Expr::Kind::Neg: return -go(q->lhs);
                            case Expr::Kind::Mul: return q->value * go(q->lhs);
                        }
                        return 0;
                    };
                    bool all = true;
                    for (auto& c : cs) {
                        long long l = go(c.lhs), r = go(c.rhs);
                        switch (c.op) {
                            case CmpOp::Eq: all &= l == r; break;
                            case CmpOp::Ne: all &= l != r; break;
                            case CmpOp::Le: all &= l <= r; break;
                            case CmpOp::Lt: all &= l < r; break;
                            case CmpOp::Ge: all &= l >= r; break;
                            case CmpOp::Gt: all &= l > r; break;
                        }
                    }
                    witness |= all;
                }
        CHECK(!witness);
    }
}
