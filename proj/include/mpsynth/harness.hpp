#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpsynth/explicit_solver.hpp"
#include "mpsynth/formula.hpp"

namespace mpsynth {

/// Environment behaviors for transducer execution.
struct EnvPolicy {
    enum class Kind { kRandom, kExhaustive, kScripted };

    Kind kind = Kind::kRandom;
    uint64_t seed = 0;               // kRandom: reproducible from seed
    uint32_t depth = 0;              // kExhaustive
    std::vector<Valuation> script;   // kScripted: packed input valuations

    static EnvPolicy random(uint64_t seed) { return {Kind::kRandom, seed, 0, {}}; }
    static EnvPolicy exhaustive(uint32_t depth) {
        return {Kind::kExhaustive, 0, depth, {}};
    }
    static EnvPolicy scripted(std::vector<Valuation> script) {
        return {Kind::kScripted, 0, 0, std::move(script)};
    }
};

enum class Verdict { kSatisfied, kVacuous, kBudgetExceeded, kStrategyError };

struct SimResult {
    Trace trace;            // over the spec alphabet
    uint32_t rounds = 0;
    Verdict verdict = Verdict::kBudgetExceeded;
    GoalSet satisfied = 0;  // goals the trace satisfies (checked on formulas)
    std::string message;
};

/// Runs a transducer against an environment policy. Each round the agent
/// emits its output valuation, then the environment picks inputs; the play
/// stops at a done state. Satisfied goal sets are recomputed from the trace
/// with the formula evaluator, never from automata.
SimResult simulate(const Spec& spec, const Transducer& t, const EnvPolicy& env,
                   uint32_t max_rounds);

struct VerifyResult {
    bool ok = false;
    GoalSet guaranteed = 0;  // goals satisfied on every environment branch
    std::optional<std::vector<Valuation>> counterexample;  // packed inputs
};

/// Checks that the transducer reaches done with every goal in `set`
/// satisfied, for all environment input sequences of length <= depth.
/// Returns the lexicographically first failing input prefix otherwise.
/// The sweep over environment branches runs in parallel when `parallel`
/// (results are identical to the serial reference either way).
VerifyResult verify_exhaustive(const Spec& spec, const Transducer& t,
                               GoalSet set, uint32_t depth,
                               bool parallel = true);

/// One line per round: "round i: Y={...} X={...} state=q".
std::string trace_dump(const Spec& spec, const Transducer& t,
                       const SimResult& result);

/// Packed input valuations in lexicographic atom-tuple order.
std::vector<Valuation> lex_packed(uint32_t width);

} // namespace mpsynth
