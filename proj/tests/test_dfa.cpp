#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mpsynth/dfa.hpp"
#include "support/gen.hpp"
#include "support/naive.hpp"

using namespace mpsynth;

namespace {

Dfa build(FormulaFactory& f, const std::string& text, const Alphabet& ab) {
    std::set<std::string> atoms(ab.atoms.begin(), ab.atoms.end());
    return build_dfa(f, parse_formula(f, text, atoms), ab);
}

}  // namespace

TEST_CASE("eps_accept rule table") {
    FormulaFactory f;
    Formula a = f.atom("a");
    Formula b = f.atom("b");
    CHECK(eps_accept(f, f.tru()));
    CHECK_FALSE(eps_accept(f, f.fls()));
    CHECK_FALSE(eps_accept(f, a));
    CHECK(eps_accept(f, f.mk_not(a)));
    CHECK_FALSE(eps_accept(f, f.mk_next(a)));
    CHECK(eps_accept(f, f.mk_weak_next(a)));
    CHECK_FALSE(eps_accept(f, f.mk_until(a, b)));  // acc(a U b) = acc(b)
    CHECK_THROWS_AS(eps_accept(f, f.mk_eventually(a)), std::invalid_argument);
}

TEST_CASE("derive rules") {
    FormulaFactory f;
    Alphabet ab{{"a", "b"}};
    Formula a = f.atom("a");
    Formula b = f.atom("b");
    CHECK(derive(f, a, 0b01, ab) == f.tru());
    CHECK(derive(f, a, 0b00, ab) == f.fls());
    CHECK(derive(f, f.mk_next(b), 0b01, ab) == b);
    CHECK(derive(f, f.mk_weak_next(b), 0b01, ab) == b);
    // d(a U b, {a}) = d(b) or (d(a) and a U b) = a U b
    Formula ub = f.mk_until(a, b);
    CHECK(derive(f, ub, 0b01, ab) == ub);
    CHECK(derive(f, ub, 0b10, ab) == f.tru());
}

TEST_CASE("minimal DFA shapes from the construction") {
    FormulaFactory f;
    Alphabet ab{{"a"}};
    Dfa atom = build(f, "a", ab);
    CHECK(atom.num_states == 3);  // start, accept sink, reject sink
    CHECK_FALSE(atom.is_final(atom.initial));

    Dfa tru = build(f, "true", ab);
    CHECK(tru.num_states == 2);
    CHECK_FALSE(tru.is_final(tru.initial));
    CHECK(tru.is_final(tru.step(tru.initial, 0)));

    Dfa next_a = build(f, "X a", ab);
    CHECK(next_a.num_states == 4);
}

TEST_CASE("dfa_accepts basics") {
    FormulaFactory f;
    Alphabet ab{{"a"}};
    Dfa d = build(f, "a", ab);
    CHECK(dfa_accepts(d, {0b1}));
    CHECK_FALSE(dfa_accepts(d, {}));
    CHECK_FALSE(dfa_accepts(d, {0b0}));

    Alphabet xb{{"x"}};
    Dfa ev = build(f, "F x", xb);
    CHECK(dfa_accepts(ev, {0b0, 0b1}));
    CHECK_FALSE(dfa_accepts(ev, {0b0, 0b0}));
}

TEST_CASE("weak next and strong next languages differ at the trace end") {
    FormulaFactory f;
    Alphabet ab{{"a"}};
    Dfa weak = build(f, "WX a", ab);
    Dfa strong = build(f, "X a", ab);
    CHECK(dfa_accepts(weak, {0b0}));         // one position: WX holds
    CHECK_FALSE(dfa_accepts(strong, {0b0}));
    CHECK(dfa_accepts(weak, {0b0, 0b1}));
    CHECK(dfa_accepts(strong, {0b0, 0b1}));
    CHECK_FALSE(dfa_accepts(weak, {0b0, 0b0}));

    // The same distinction nested under U, where the residual alone cannot
    // carry the answer.
    Dfa nested = build(f, "a U (WX a)", ab);
    CHECK(dfa_accepts(nested, {0b0}));  // j=0 works: WX a true at the end
}

TEST_CASE("X true is not true") {
    FormulaFactory f;
    Alphabet ab{{"a"}};
    Dfa d = build(f, "X true", ab);
    CHECK_FALSE(dfa_accepts(d, {0b0}));
    CHECK_FALSE(dfa_accepts(d, {0b1}));
    CHECK(dfa_accepts(d, {0b0, 0b0}));
}

TEST_CASE("minimize: idempotent and language preserving") {
    FormulaFactory f;
    Alphabet ab{{"a", "b"}};
    std::mt19937_64 rng(17);
    for (int i = 0; i < 40; ++i) {
        Dfa d = testing::random_dfa(rng, ab, 2 + rng() % 6);
        Dfa m = minimize(d);
        CHECK(m.num_states <= d.num_states);
        Dfa mm = minimize(m);
        CHECK(dfa_isomorphic(m, mm));
        // language equality on all traces up to length 4
        std::vector<Trace> stack{{}};
        for (int len = 0; len < 4; ++len) {
            std::vector<Trace> next;
            for (const Trace& t : stack) {
                for (Valuation sym = 0; sym < ab.num_symbols(); ++sym) {
                    Trace t2 = t;
                    t2.push_back(sym);
                    CHECK(dfa_accepts(d, t2) == dfa_accepts(m, t2));
                    next.push_back(t2);
                }
            }
            stack = std::move(next);
        }
    }
}

TEST_CASE("tautologies collapse to the true automaton") {
    FormulaFactory f;
    Alphabet ab{{"a"}};
    Dfa taut = build(f, "a | !a", ab);
    Dfa tru = build(f, "true", ab);
    CHECK(dfa_isomorphic(taut, tru));
}

TEST_CASE("semantic soundness on random formulas") {
    FormulaFactory f;
    Alphabet ab{{"a", "b", "c"}};
    std::mt19937_64 rng(23);
    for (int i = 0; i < 60; ++i) {
        Formula phi = testing::random_formula(f, rng, {"a", "b", "c"}, 4);
        Dfa d = build_dfa(f, phi, ab);
        std::string mismatch;
        bool ok = testing::dfa_matches_semantics(d, f, phi, ab, 4, &mismatch);
        INFO(mismatch);
        CHECK(ok);
    }
}

TEST_CASE("negation swaps acceptance on non-empty traces") {
    FormulaFactory f;
    Alphabet ab{{"a", "b"}};
    std::mt19937_64 rng(29);
    for (int i = 0; i < 30; ++i) {
        Formula phi = testing::random_formula(f, rng, {"a", "b"}, 3);
        Dfa pos = build_dfa(f, phi, ab);
        Dfa neg = build_dfa(f, f.mk_not(phi), ab);
        for (int k = 0; k < 50; ++k) {
            Trace t = testing::random_trace(rng, 2, 5);
            CHECK(dfa_accepts(pos, t) != dfa_accepts(neg, t));
        }
    }
}

TEST_CASE("state cap fails loudly") {
    FormulaFactory f;
    Alphabet ab{{"a", "b", "c"}};
    std::set<std::string> atoms{"a", "b", "c"};
    Formula phi = parse_formula(f, "F (a & X (b & X c)) & G (a -> X b)", atoms);
    CHECK_THROWS_AS(build_dfa(f, phi, ab, 2), ResourceError);
}

TEST_CASE("lift_dfa preserves the language under projection") {
    FormulaFactory f;
    Alphabet sub{{"a"}};
    Alphabet full{{"a", "b"}};
    Dfa d = build(f, "F a", sub);
    Dfa lifted = lift_dfa(d, full);
    std::mt19937_64 rng(31);
    for (int i = 0; i < 100; ++i) {
        Trace t = testing::random_trace(rng, 2, 5);
        Trace projected;
        for (Valuation sym : t) projected.push_back(sym & 1u);
        CHECK(dfa_accepts(lifted, t) == dfa_accepts(d, projected));
    }
}

TEST_CASE("dot export is stable") {
    FormulaFactory f;
    Alphabet ab{{"a"}};
    Dfa d = build(f, "a", ab);
    std::string dot = dfa_to_dot(d);
    CHECK(dot.find("doublecircle") != std::string::npos);
    CHECK(dot == dfa_to_dot(d));
}

TEST_CASE("goal sub-alphabets follow spec order") {
    Spec spec = parse_spec(
        "INPUTS: x1 x2\nOUTPUTS: y1 y2\nGOAL g1: F (y2 & x1)\n");
    Alphabet sub = goal_alphabet(spec, spec.goals[0].formula);
    CHECK(sub.atoms == std::vector<std::string>{"x1", "y2"});
    std::vector<Dfa> dfas = build_goal_dfas(spec);
    CHECK(dfas.size() == 1);
    CHECK(dfas[0].alphabet.atoms == sub.atoms);
}
