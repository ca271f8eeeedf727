#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mpsynth/harness.hpp"
#include "mpsynth/symbolic.hpp"
#include "mpsynth/transducer_io.hpp"
#include "support/fixture.hpp"

using namespace mpsynth;
using namespace mpsynth::testing;

namespace {

constexpr GoalSet kG12 = 0b011;
constexpr GoalSet kG23 = 0b110;

struct Solved {
    BranchFixture fx;
    WinRelation w;
    Solved() : fx(make_branch_fixture()), w(win_m(fx.arena)) {}
};

}  // namespace

TEST_CASE("simulate the y2 strategy against a random environment") {
    Solved s;
    Transducer t = extract_strategy(s.fx.arena, s.w, kG23);
    SimResult r = simulate(s.fx.spec, t, EnvPolicy::random(1), 16);
    CHECK(r.verdict == Verdict::kSatisfied);
    CHECK(r.rounds == 1);
    CHECK((r.satisfied & kG23) == kG23);
    CHECK(r.trace.size() == 1);
}

TEST_CASE("the empty goal set gives a vacuous run") {
    Solved s;
    Transducer t = extract_strategy(s.fx.arena, s.w, 0);
    SimResult r = simulate(s.fx.spec, t, EnvPolicy::random(7), 16);
    CHECK(r.verdict == Verdict::kVacuous);
    CHECK(r.trace.empty());
    CHECK(r.rounds == 0);
}

TEST_CASE("zero round budget on a non-done strategy") {
    Solved s;
    Transducer t = extract_strategy(s.fx.arena, s.w, kG12);
    SimResult r = simulate(s.fx.spec, t, EnvPolicy::random(3), 0);
    CHECK(r.verdict == Verdict::kBudgetExceeded);
}

TEST_CASE("scripted environments and random ones are reproducible") {
    Solved s;
    Transducer t = extract_strategy(s.fx.arena, s.w, kG12);
    SimResult a = simulate(s.fx.spec, t, EnvPolicy::random(42), 16);
    SimResult b = simulate(s.fx.spec, t, EnvPolicy::random(42), 16);
    CHECK(a.trace == b.trace);

    SimResult c = simulate(s.fx.spec, t, EnvPolicy::scripted({0b01}), 16);
    CHECK(c.verdict == Verdict::kSatisfied);
    // Input x1 with the y1 move lands in the all-goals state.
    CHECK(c.satisfied == 0b111);
}

TEST_CASE("verify_exhaustive passes correct strategies at full depth") {
    Solved s;
    for (GoalSet c = 0; c < 8; ++c) {
        if (s.w.get_rank(s.fx.arena.initial, c, 3) == UINT32_MAX) continue;
        Transducer t = extract_strategy(s.fx.arena, s.w, c);
        VerifyResult v =
            verify_exhaustive(s.fx.spec, t, c, s.fx.arena.num_states);
        INFO("goal set " << c);
        CHECK(v.ok);
        CHECK((v.guaranteed & c) == c);
    }
}

TEST_CASE("a corrupted strategy yields the first counterexample") {
    Solved s;
    Transducer t = extract_strategy(s.fx.arena, s.w, kG12);
    // Flip the first move to the y2 valuation: the play lands in the state
    // satisfying {g2,g3}, so g1 fails on every branch.
    t.states[t.initial].output = 0b10;
    for (uint32_t x = 0; x < 4; ++x) {
        // Rewire to the arena state reached by the y2 move, kept done.
        t.states[t.initial].next[x] = 1;
    }
    t.states.resize(2);
    t.states[1].output.reset();
    t.states[1].next.clear();
    VerifyResult v = verify_exhaustive(s.fx.spec, t, kG12, 4);
    REQUIRE_FALSE(v.ok);
    REQUIRE(v.counterexample.has_value());
    CHECK(v.counterexample->size() == 1);
    // Lexicographically first input valuation: all inputs false.
    CHECK((*v.counterexample)[0] == 0);
}

TEST_CASE("serial and parallel verification agree") {
    Solved s;
    Transducer t = extract_strategy(s.fx.arena, s.w, kG23);
    VerifyResult a = verify_exhaustive(s.fx.spec, t, kG23, 6, false);
    VerifyResult b = verify_exhaustive(s.fx.spec, t, kG23, 6, true);
    CHECK(a.ok == b.ok);
    CHECK(a.guaranteed == b.guaranteed);
    CHECK(a.counterexample == b.counterexample);
}

TEST_CASE("symbolic and explicit strategies are behaviorally equivalent") {
    Solved s;
    BddEngine engine;
    SymbolicArena arena =
        encode(s.fx.components, s.fx.spec.inputs, s.fx.spec.outputs, engine);
    WinningFormulas wf = symbolic_fixpoint(arena);
    for (GoalSet c = 0; c < 8; ++c) {
        if (s.w.get_rank(s.fx.arena.initial, c, 3) == UINT32_MAX) continue;
        Transducer te = extract_strategy(s.fx.arena, s.w, c);
        Transducer ts = symbolic_strategy(wf, arena, c);
        VerifyResult ve = verify_exhaustive(s.fx.spec, te, c, 4);
        VerifyResult vs = verify_exhaustive(s.fx.spec, ts, c, 4);
        CHECK(ve.ok);
        CHECK(vs.ok);
        CHECK(ve.guaranteed == vs.guaranteed);
    }
}

TEST_CASE("trace dump format") {
    Solved s;
    Transducer t = extract_strategy(s.fx.arena, s.w, kG23);
    SimResult r = simulate(s.fx.spec, t, EnvPolicy::random(5), 8);
    std::string dump = trace_dump(s.fx.spec, t, r);
    CHECK(dump.rfind("round 0: Y={y2} X=", 0) == 0);
    CHECK(dump.find("state=q0") != std::string::npos);
}

TEST_CASE("transducer JSON round trip preserves behavior") {
    Solved s;
    Transducer t = extract_strategy(s.fx.arena, s.w, kG12);
    std::string json = transducer_to_json(t);
    CHECK(json == transducer_to_json(t));  // byte stable
    Transducer back = transducer_from_json(json);
    VerifyResult v = verify_exhaustive(s.fx.spec, back, kG12, 4);
    CHECK(v.ok);
    CHECK(transducer_to_json(back) == json);
}

TEST_CASE("golden transducer JSON") {
    Solved s;
    Transducer t = extract_strategy(s.fx.arena, s.w, 0);
    CHECK(transducer_to_json(t) ==
          "{\n"
          "  \"inputs\": [\n    \"x1\",\n    \"x2\"\n  ],\n"
          "  \"outputs\": [\n    \"y1\",\n    \"y2\"\n  ],\n"
          "  \"initial\": 0,\n"
          "  \"states\": [\n"
          "    {\n      \"id\": 0,\n      \"output\": \"done\"\n    }\n"
          "  ]\n"
          "}\n");
}
