#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "chc/evaluator.hpp"
#include "chc/parser.hpp"

#include <fstream>
#include <sstream>

using namespace chc;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string fixture(const std::string& name) {
    return std::string(CHC_FIXTURE_DIR) + "/" + name;
}

long long list_id(Extension& e, const std::vector<long long>& xs) {
    int id = 0;
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) {
        id = e.lists.cons(*it, id);
        REQUIRE(id >= 0);
    }
    return id;
}

const char* kCountClauses =
    ":- pred count(int,list(int),int).\n"
    "count(X,[],0).\n"
    "count(X,[H|T],N) :- X=H, N=M+1, count(X,T,M).\n"
    "count(X,[H|T],N) :- X=\\=H, count(X,T,N).\n";

}  // namespace

TEST_CASE("least model of the count clauses") {
    auto p = parse_program(kCountClauses);
    Universe u;
    auto ext = least_model(p, u);
    Tuple t{1, list_id(ext, {1, 2, 1}), 2};
    CHECK(ext.holds("count", t));
    CHECK(!ext.holds("count", Tuple{1, list_id(ext, {1, 2, 1}), 1}));
}

TEST_CASE("least model of insertion sort") {
    auto p = parse_program(slurp(fixture("01_insertionsort_perm.initial.chc")));
    Universe u;
    auto ext = least_model(p, u);
    Tuple t{list_id(ext, {2, 0, 1}), list_id(ext, {0, 1, 2})};
    CHECK(ext.holds("insertionSort", t));
    CHECK(!ext.holds("insertionSort", Tuple{list_id(ext, {2, 0, 1}), list_id(ext, {2, 0, 1})}));
}

TEST_CASE("the empty program has an empty extension") {
    Program p;
    Universe u;
    auto ext = least_model(p, u);
    CHECK(ext.rels.empty());
}

TEST_CASE("semi-naive and naive evaluation agree") {
    for (auto* f : {"01_insertionsort_perm.initial.chc", "02_insertionsort_orderedness.initial.chc",
                    "04_insertionsort_sum.initial.chc"}) {
        auto p = parse_program(slurp(fixture(f)));
        Universe u;
        u.int_hi = 1;
        u.max_list_len = 2;
        auto a = least_model(p, u);
        auto b = least_model_naive(p, u);
        CHECK(a.rels == b.rels);
    }
}

TEST_CASE("enlarging the universe never shrinks an extension") {
    auto p = parse_program(kCountClauses);
    Universe small;
    small.int_hi = 1;
    small.max_list_len = 2;
    Universe big;
    big.int_hi = 2;
    big.max_list_len = 3;
    auto es = least_model(p, small);
    auto eb = least_model(p, big);
    for (auto& [pred, rel] : es.rels) {
        for (auto& t : rel) {
            Tuple tb = t;
            const PredDecl* d = p.find_decl(pred);
            for (size_t i = 0; i < t.size(); i++) {
                if (d->arg_sorts[i] != Sort::List) continue;
                std::string shown = es.lists.to_string((int)t[i]);
                bool found = false;
                for (int id = 0; id < (int)eb.lists.nodes.size() && !found; id++)
                    if (eb.lists.to_string(id) == shown) {
                        tb[i] = id;
                        found = true;
                    }
                REQUIRE(found);
            }
            CHECK(eb.holds(pred, tb));
        }
    }
}

TEST_CASE("bounded_sat finds no refutation for the insertion sort fixture") {
    auto p = parse_program(slurp(fixture("01_insertionsort_perm.initial.chc")));
    Universe u;
    auto r = bounded_sat(p, u);
    CHECK(!r.false_derived);
}

TEST_CASE("the negated goal is refuted and the witness validates") {
    auto p = parse_program(slurp(fixture("01_insertionsort_perm.negated.chc")));
    Universe u;
    auto r = bounded_sat(p, u);
    REQUIRE(r.false_derived);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->is_goal);
    CHECK(validate_witness(*r.witness, p, r.model));
    std::string text = witness_to_string(*r.witness, p);
    CHECK(text.find("false") != std::string::npos);
}

TEST_CASE("ordered(S,true) mutation of the orderedness fixture is refuted") {
    auto p = parse_program(slurp(fixture("02_insertionsort_orderedness.negated.chc")));
    Universe u;
    auto r = bounded_sat(p, u);
    CHECK(r.false_derived);
}

TEST_CASE("comparing a program with itself agrees") {
    auto p = parse_program(kCountClauses);
    Universe u;
    auto r = compare_programs(p, p, u);
    CHECK(r.verdict == CompareVerdict::Agree);
}

TEST_CASE("a broken transformed program is caught by compare") {
    auto initial = parse_program(slurp(fixture("01_insertionsort_perm.initial.chc")));
    std::string text = slurp(fixture("01_insertionsort_perm.transformed.chc"));
    auto pos = text.find("new1(X,0,0).");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 12, "new1(X,0,1).");
    auto broken = parse_program(text);
    Universe u;
    auto r = compare_programs(initial, broken, u);
    CHECK(r.verdict == CompareVerdict::Disagree);
    CHECK(r.right.false_derived);
}

TEST_CASE("the work cap guards against oversized universes") {
    auto p = parse_program(slurp(fixture("01_insertionsort_perm.initial.chc")));
    Universe u;
    u.work_cap = 500;
    CHECK_THROWS_AS(least_model(p, u), UniverseTooLarge);
}

TEST_CASE("strict mode reports constants outside the range") {
    auto p = parse_program(":- pred p(int).\np(5).\n");
    Universe u;
    CHECK_THROWS_AS(least_model(p, u, true), UniverseTooSmall);
    auto ext = least_model(p, u, false);
    CHECK(ext.holds("p", Tuple{5}));
}

TEST_CASE("clause order does not change the least model") {
    auto p1 = parse_program(kCountClauses);
    auto p2 = parse_program(
        ":- pred count(int,list(int),int).\n"
        "count(X,[H|T],N) :- X=\\=H, count(X,T,N).\n"
        "count(X,[H|T],N) :- X=H, N=M+1, count(X,T,M).\n"
        "count(X,[],0).\n");
    Universe u;
    CHECK(least_model(p1, u).rels == least_model(p2, u).rels);
}
