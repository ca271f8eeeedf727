#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mpsynth/formula.hpp"
#include "support/gen.hpp"

using namespace mpsynth;

namespace {

std::set<std::string> abc() { return {"a", "b", "c"}; }

Formula parse(FormulaFactory& f, const std::string& text) {
    return parse_formula(f, text, abc());
}

}  // namespace

TEST_CASE("parse constants and atoms") {
    FormulaFactory f;
    CHECK(parse(f, "true") == f.tru());
    CHECK(parse(f, "false") == f.fls());
    CHECK(parse(f, "a") == f.atom("a"));
}

TEST_CASE("precedence: !a U b parses as (!a) U b") {
    FormulaFactory f;
    Formula expected = f.mk_until(f.mk_not(f.atom("a")), f.atom("b"));
    CHECK(parse(f, "!a U b") == expected);
}

TEST_CASE("precedence: F (y & x) style grouping") {
    FormulaFactory f;
    Formula expected = f.mk_eventually(f.mk_and(f.atom("a"), f.atom("b")));
    CHECK(parse(f, "F (a & b)") == expected);
}

TEST_CASE("precedence ladder") {
    FormulaFactory f;
    // & binds tighter than |, | than ->, -> than <->
    CHECK(parse(f, "a & b | c") == parse(f, "(a & b) | c"));
    CHECK(parse(f, "a | b -> c") == parse(f, "(a | b) -> c"));
    CHECK(parse(f, "a -> b <-> c") == parse(f, "(a -> b) <-> c"));
    CHECK(parse(f, "a -> b -> c") == parse(f, "a -> (b -> c)"));
    CHECK(parse(f, "a U b U c") == parse(f, "a U (b U c)"));
    CHECK(parse(f, "a U b & c") == parse(f, "(a U b) & c"));
}

TEST_CASE("syntax errors carry position, undeclared atoms are named") {
    FormulaFactory f;
    CHECK_THROWS_AS(parse(f, "a &"), ParseError);
    CHECK_THROWS_AS(parse(f, "(a"), ParseError);
    try {
        parse(f, "a & zz");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("zz") != std::string::npos);
    }
}

TEST_CASE("normalization folds") {
    FormulaFactory f;
    Formula a = f.atom("a");
    CHECK(f.mk_not(f.mk_not(a)) == a);
    CHECK(f.mk_and(a, f.tru()) == a);
    CHECK(f.mk_and(a, f.fls()) == f.fls());
    CHECK(f.mk_or(a, f.fls()) == a);
    CHECK(f.mk_and(a, a) == a);
    CHECK(f.mk_and(a, f.atom("b")) == f.mk_and(f.atom("b"), a));
    CHECK(f.mk_until(a, f.tru()) == f.tru());
    CHECK(f.mk_next(f.fls()) == f.fls());
    CHECK(f.mk_weak_next(f.tru()) == f.tru());
}

TEST_CASE("parse_spec basics") {
    Spec spec = parse_spec("INPUTS: x\nOUTPUTS: y\nGOAL g1: F y\n");
    CHECK(spec.inputs == std::vector<std::string>{"x"});
    CHECK(spec.outputs == std::vector<std::string>{"y"});
    CHECK(spec.goals.size() == 1);
    CHECK(spec.goals[0].label == "g1");
}

TEST_CASE("parse_spec rejects bad input") {
    CHECK_THROWS_AS(parse_spec("INPUTS: x\nOUTPUTS: x\nGOAL g: F x\n"),
                    ParseError);  // atom in both sections
    CHECK_THROWS_AS(parse_spec("INPUTS: x\nOUTPUTS: y\nGOAL g: F z\n"),
                    ParseError);  // undeclared atom
    CHECK_THROWS_AS(
        parse_spec("INPUTS: x\nOUTPUTS: y\nGOAL g: x\nGOAL g: y\n"),
        ParseError);  // duplicate label
    CHECK_THROWS_AS(parse_spec("INPUTS: x\nOUTPUTS: y\n"), ParseError);
}

TEST_CASE("parse_spec keeps goal order and supports comments") {
    Spec spec = parse_spec(
        "# comment line\n"
        "INPUTS: x1 x2\n"
        "OUTPUTS: y1\n"
        "GOAL g1: F y1   # trailing comment\n"
        "GOAL g2: G !x1\n"
        "GOAL g3: x2 U y1\n");
    CHECK(spec.goals.size() == 3);
    CHECK(spec.goals[0].label == "g1");
    CHECK(spec.goals[1].label == "g2");
    CHECK(spec.goals[2].label == "g3");
}

TEST_CASE("evaluate per the satisfaction clauses") {
    FormulaFactory f;
    Alphabet ab{{"a", "b"}};
    Formula a = f.atom("a");
    Formula b = f.atom("b");

    Trace t1 = {0b01};  // {a}
    CHECK(evaluate(f, ab, t1, a, 0));
    CHECK_FALSE(evaluate(f, ab, t1, f.mk_next(a), 0));  // no next position
    CHECK(evaluate(f, ab, t1, f.mk_weak_next(a), 0));

    Trace t2 = {0b01, 0b10};  // {a} {b}
    CHECK(evaluate(f, ab, t2, f.mk_until(a, b), 0));
    CHECK_FALSE(evaluate(f, ab, t2, f.mk_until(b, a), 1));
    CHECK(evaluate(f, ab, t2, f.mk_eventually(b), 0));
    CHECK_FALSE(evaluate(f, ab, t2, f.mk_globally(a), 0));

    CHECK_THROWS_AS(evaluate(f, ab, Trace{}, a, 0), std::out_of_range);
    CHECK_THROWS_AS(evaluate(f, ab, t1, a, 1), std::out_of_range);
}

TEST_CASE("weak next is the dual of strong next") {
    FormulaFactory f;
    Alphabet ab{{"a", "b"}};
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        Formula phi = testing::random_formula(f, rng, {"a", "b"}, 3);
        Formula weak = f.mk_weak_next(phi);
        Formula strong_dual = f.mk_not(f.mk_next(f.mk_not(phi)));
        Trace t = testing::random_trace(rng, 2, 5);
        for (size_t pos = 0; pos < t.size(); ++pos) {
            CHECK(evaluate(f, ab, t, weak, pos) ==
                  evaluate(f, ab, t, strong_dual, pos));
        }
        // At the last position X phi is false and WX phi is true.
        CHECK_FALSE(evaluate(f, ab, t, f.mk_next(phi), t.size() - 1));
        CHECK(evaluate(f, ab, t, weak, t.size() - 1));
    }
}

TEST_CASE("desugaring preserves satisfaction") {
    FormulaFactory f;
    Alphabet ab{{"a", "b", "c"}};
    std::mt19937_64 rng(11);
    for (int i = 0; i < 400; ++i) {
        Formula phi = testing::random_formula(f, rng, {"a", "b", "c"}, 4);
        Formula core = f.desugar(phi);
        CHECK(is_core_op(f.op(core)));
        Trace t = testing::random_trace(rng, 3, 6);
        CHECK(evaluate(f, ab, t, phi, 0) == evaluate(f, ab, t, core, 0));
    }
}

TEST_CASE("desugar definitional shapes") {
    FormulaFactory f;
    Formula a = f.atom("a");
    CHECK(f.desugar(f.mk_eventually(a)) == f.mk_until(f.tru(), a));
    CHECK(f.desugar(f.mk_globally(a)) ==
          f.mk_not(f.mk_until(f.tru(), f.mk_not(a))));
}

TEST_CASE("print/parse round trip") {
    FormulaFactory f;
    std::mt19937_64 rng(3);
    for (int i = 0; i < 500; ++i) {
        Formula phi = testing::random_formula(f, rng, {"a", "b", "c"}, 4);
        Formula again = parse(f, f.to_string(phi));
        CHECK(again == phi);
    }
}
