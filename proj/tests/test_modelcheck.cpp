#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "chc/evaluator.hpp"
#include "chc/modelcheck.hpp"
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

}  // namespace

TEST_CASE("the insertion sort permutation model validates") {
    auto p = parse_program(slurp(fixture("01_insertionsort_perm.transformed.chc")));
    auto m = parse_model(slurp(fixture("01_insertionsort_perm.model.pl")));
    auto r = check_model(p, m, Box{});
    CHECK(r.valid);
}

TEST_CASE("a mutated fact formula yields a counterexample at the fact") {
    auto p = parse_program(slurp(fixture("01_insertionsort_perm.transformed.chc")));
    auto m = parse_model(slurp(fixture("01_insertionsort_perm.model.pl")));
    // new1 formula becomes B = C+1
    auto& e = m.entries.at("new1");
    REQUIRE(e.formula.kind == ModelFormula::Kind::And);
    auto& cmp = e.formula.kids[0];
    REQUIRE(cmp.kind == ModelFormula::Kind::Cmp);
    cmp.cmp.rhs = Expr::add(cmp.cmp.rhs, Expr::constant(1));
    auto r = check_model(p, m, Box{});
    REQUIRE(!r.valid);
    REQUIRE(r.cex.has_value());
    const Clause* c = p.find_clause(r.cex->clause_id);
    REQUIRE(c);
    // the fact new1(X,0,0) itself is falsified: {B:0, C:0} breaks B = C+1
    auto fact = check_model(
        parse_program(":- pred new1(int,int,int).\nnew1(X,0,0).\n"), m, Box{});
    CHECK(!fact.valid);
    CHECK(fact.cex->assignment.size() == 1);  // only X is free
}

TEST_CASE("the orderedness model validates over booleans") {
    auto p = parse_program(slurp(fixture("02_insertionsort_orderedness.transformed.chc")));
    auto m = parse_model(slurp(fixture("02_insertionsort_orderedness.model.pl")));
    auto r = check_model(p, m, Box{});
    CHECK(r.valid);
}

TEST_CASE("check_model rejects programs with lists") {
    auto p = parse_program(slurp(fixture("01_insertionsort_perm.initial.chc")));
    Model m;
    CHECK_THROWS_AS(check_model(p, m, Box{}), NotADTFree);
}

TEST_CASE("missing predicates are an error unless defaulted") {
    auto p = parse_program(
        ":- pred a(int).\n"
        "a(0).\n");
    Model m;
    CHECK_THROWS_AS(check_model(p, m, Box{}), MissingPredicate);
    auto r = check_model(p, m, Box{}, false);
    CHECK(r.valid);
    REQUIRE(r.warnings.size() == 1);
}

TEST_CASE("counterexamples re-verify by direct evaluation") {
    // head false whenever the body holds: p(X) :- X>=1 with model p := A=0
    auto p = parse_program(":- pred a(int).\na(X) :- X>=1.\n");
    auto m = parse_model("a(A) :- (A = 0).\n");
    auto r = check_model(p, m, Box{});
    REQUIRE(!r.valid);
    auto x = r.cex->assignment.at("X");
    CHECK(x >= 1);
    CHECK(x != 0);
}

TEST_CASE("functionality of the insertion sort difference predicate") {
    auto m = parse_model(slurp(fixture("01_insertionsort_perm.model.pl")));
    auto r = check_functionality(m.entries.at("diff1"),
                                 {Sort::Int, Sort::Int, Sort::Int},
                                 {Mode::In, Mode::In, Mode::Out}, Box{});
    CHECK(r.functional);
}

TEST_CASE("a relation that is no function is reported with two outputs") {
    auto m = parse_model("d(A,B) :- (B >= 0).\n");
    auto r = check_functionality(m.entries.at("d"), {Sort::Int, Sort::Int},
                                 {Mode::In, Mode::Out}, Box{});
    REQUIRE(!r.functional);
    CHECK(r.out1 != r.out2);
}

TEST_CASE("functionality of the sum difference predicate") {
    auto m = parse_model(slurp(fixture("04_insertionsort_sum.model.pl")));
    auto r = check_functionality(m.entries.at("diff"), {Sort::Int, Sort::Int, Sort::Int},
                                 {Mode::In, Mode::In, Mode::Out}, Box{});
    CHECK(r.functional);
}

TEST_CASE("lemma text for the insertion sort difference predicate") {
    auto p = parse_program(
        ":- pred ins(int,list(int),list(int)).\n"
        ":- pred count(int,list(int),int).\n"
        ":- pred diff1(int,int,int).\n"
        ":- mode diff1(in,in,out).\n"
        "diff1(X,N2a,N2) :- ins(X,S1,S), count(X,S,N2), count(X,S1,N2a).\n");
    auto m = parse_model(slurp(fixture("01_insertionsort_perm.model.pl")));
    std::string lemma = extract_lemma(p.clauses[0], *p.find_decl("diff1"), m.entries.at("diff1"));
    // whitespace-insensitive comparison of the conclusion
    std::string squeezed;
    for (char c : lemma)
        if (!isspace((unsigned char)c)) squeezed += c;
    CHECK(squeezed.find("N2=N2a+1") != std::string::npos);
    CHECK(squeezed.find("N2a>=0") != std::string::npos);
    CHECK(lemma.find("ins(X,S1,S)") != std::string::npos);
    CHECK(lemma.find("count(X,S,N2)") != std::string::npos);
    CHECK(lemma.find("count(X,S1,N2a)") != std::string::npos);
}

TEST_CASE("lemma with a trivially true conclusion") {
    auto p = parse_program(
        ":- pred q(list(int),int).\n"
        ":- pred d(int).\n"
        "d(N) :- q(T,N).\n");
    auto m = parse_model("d(A) :- true.\n");
    std::string lemma = extract_lemma(p.clauses[0], *p.find_decl("d"), m.entries.at("d"));
    CHECK(lemma.find("true") != std::string::npos);
}

TEST_CASE("a box too small to enumerate reports an error") {
    auto p = parse_program(":- pred a(int,int,int,int,int,int,int,int,int,int).\n"
                           "a(A,B,C,D,E,F,G,H,I,J) :- A+B+C+D+E+F+G+H+I+J>=30.\n");
    auto m = parse_model("a(A,B,C,D,E,F,G,H,I,J) :- false.\n");
    Box box;
    box.cap = 100;
    CHECK_THROWS_AS(check_model(p, m, box), BoxTooLarge);
}
