#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "chc/parser.hpp"
#include "chc/smtlib.hpp"

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

const char* kFixtures[] = {
    "01_insertionsort_perm",  "02_insertionsort_orderedness", "03_insertionsort_length",
    "04_insertionsort_sum",   "05_selectionsort_perm",        "06_selectionsort_orderedness",
    "07_selectionsort_length", "08_quicksort_perm",           "09_quicksort_sum",
    "10_mergesort_sum"};

std::string fixture(const std::string& name) {
    return std::string(CHC_FIXTURE_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("the insertion sort permutation file parses to 3 declarations and 9 clauses") {
    auto p = parse_program(slurp(fixture("01_insertionsort_perm.initial.chc")));
    CHECK(p.decls.size() == 3);
    CHECK(p.clauses.size() == 9);
    CHECK(p.clauses[0].is_goal());
}

TEST_CASE("undeclared predicates are rejected") {
    CHECK_THROWS_AS(parse_program("p(X) :- X=<Y."), UndeclaredPredicate);
}

TEST_CASE("arity mismatches are rejected") {
    CHECK_THROWS_AS(parse_program(":- pred p(int).\np(X,Y)."), ArityMismatch);
}

TEST_CASE("a list variable inside arithmetic is a sort error") {
    CHECK_THROWS_AS(parse_program(":- pred q(list(int)).\nq(L) :- L=<3."), SortError);
}

TEST_CASE("count clause structure") {
    auto p = parse_program(
        ":- pred count(int,list(int),int).\n"
        "count(X,[H|T],N) :- X=H, N=M+1, count(X,T,M).");
    auto& c = p.clauses[0];
    REQUIRE(c.head.has_value());
    CHECK(c.head->pred == "count");
    CHECK(c.head->args.size() == 3);
    CHECK(c.constraints().size() == 2);
    REQUIRE(c.atoms().size() == 1);
    CHECK(c.atoms()[0]->pred == "count");
}

TEST_CASE("list equations are resolved by unification at parse time") {
    auto p = parse_program(
        ":- pred q(list(int)).\n"
        "q(T) :- T=[Y|T1], q(T1).");
    auto& c = p.clauses[0];
    // T was replaced by [Y|T1] everywhere, the equation disappeared
    CHECK(c.constraints().empty());
    CHECK(term_has_constructor(c.head->args[0]));
    CHECK(clause_to_string(c) == "q([Y|T1]) :- q(T1).");
}

TEST_CASE("default modes make the last argument an output") {
    auto p = parse_program(":- pred count(int,list(int),int).\ncount(X,[],0).");
    auto* d = p.find_decl("count");
    REQUIRE(d);
    CHECK(d->modes ==
          std::vector<Mode>{Mode::In, Mode::In, Mode::Out});
}

TEST_CASE("explicit mode annotations override the default") {
    auto p = parse_program(
        ":- pred partition(int,list(int),list(int),list(int)).\n"
        ":- mode partition(in,in,out,out).\n"
        "partition(X,[],[],[]).");
    auto* d = p.find_decl("partition");
    REQUIRE(d);
    CHECK(d->modes == std::vector<Mode>{Mode::In, Mode::In, Mode::Out, Mode::Out});
    CHECK(d->modes_declared);
}

TEST_CASE("all fixture listings round-trip through print and parse") {
    for (auto* name : kFixtures) {
        for (auto* kind : {".initial.chc", ".transformed.chc", ".negated.chc"}) {
            std::string path = fixture(std::string(name) + kind);
            INFO(path);
            Program p = parse_program(slurp(path));
            Program q = parse_program(print_program(p));
            CHECK(program_equal(p, q));
            // printing is a fixpoint after one round
            CHECK(print_program(p) == print_program(q));
        }
    }
}

TEST_CASE("all fixture models parse") {
    for (auto* name : kFixtures) {
        std::string path = fixture(std::string(name) + ".model.pl");
        INFO(path);
        Model m = parse_model(slurp(path));
        CHECK(!m.entries.empty());
    }
}

TEST_CASE("model entries capture parameters and formulas") {
    Model m = parse_model("new1(A,B,C) :- ((B = C), (B >= 0)).\n");
    auto& e = m.entries.at("new1");
    CHECK(e.params == std::vector<std::string>{"A", "B", "C"});
    CHECK(e.formula.kind == ModelFormula::Kind::And);
}

TEST_CASE("a bare true formula is accepted") {
    Model m = parse_model("new4(A) :- true.\n");
    CHECK(m.entries.at("new4").formula.kind == ModelFormula::Kind::True);
}

TEST_CASE("negation and disjunction in models") {
    Model m = parse_model("diff(A,B,C) :- (\\+((C = true)); (B = true)).\n");
    auto& f = m.entries.at("diff").formula;
    REQUIRE(f.kind == ModelFormula::Kind::Or);
    CHECK(f.kids[0].kind == ModelFormula::Kind::Not);
}

TEST_CASE("out-of-scope model variables are rejected") {
    CHECK_THROWS_AS(parse_model("p(A) :- (B = 0).\n"), ParseError);
}

TEST_CASE("smtlib output for a goal clause") {
    auto p = parse_program(
        ":- pred new1(int,int,int).\n"
        "false :- N1=\\=N2, new1(X,N1,N2).");
    std::string smt = emit_smtlib(p);
    CHECK(smt.find("(set-logic HORN)") != std::string::npos);
    CHECK(smt.find("(declare-fun new1 (Int Int Int) Bool)") != std::string::npos);
    CHECK(smt.find("(=> (and (not (= N1 N2)) (new1 X N1 N2)) false)") != std::string::npos);
    CHECK(smt.find("(check-sat)") != std::string::npos);
    CHECK(smt.find("(get-model)") != std::string::npos);
}

TEST_CASE("smtlib output for a fact quantifies its variables") {
    auto p = parse_program(":- pred new2(int,int).\nnew2(X,0).");
    std::string smt = emit_smtlib(p);
    CHECK(smt.find("(assert (forall ((X Int)) (new2 X 0)))") != std::string::npos);
}

TEST_CASE("smtlib output is deterministic and declares the list datatype when needed") {
    auto text = slurp(fixture("01_insertionsort_perm.initial.chc"));
    auto p = parse_program(text);
    std::string a = emit_smtlib(p);
    std::string b = emit_smtlib(parse_program(text));
    CHECK(a == b);
    CHECK(a.find("declare-datatypes") != std::string::npos);

    auto q = parse_program(slurp(fixture("01_insertionsort_perm.transformed.chc")));
    CHECK(emit_smtlib(q).find("declare-datatypes") == std::string::npos);
}

TEST_CASE("random programs round-trip") {
    // a small deterministic family of generated programs
    for (int k = 0; k < 20; k++) {
        std::ostringstream os;
        os << ":- pred p" << k << "(int,list(int)).\n";
        os << ":- pred r(int).\n";
        os << "p" << k << "(X,[X|T]) :- X>=" << k << ", p" << k << "(X,T).\n";
        os << "r(X) :- X=" << k << ".\n";
        os << "p" << k << "(X,[]).\n";
        Program p = parse_program(os.str());
        CHECK(program_equal(p, parse_program(print_program(p))));
    }
}
