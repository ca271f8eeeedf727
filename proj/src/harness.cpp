#include "mpsynth/harness.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mpsynth {

std::vector<Valuation> lex_packed(uint32_t width) {
    std::vector<Valuation> out;
    out.reserve(1u << width);
    for (uint32_t v = 0; v < (1u << width); ++v) {
        Valuation packed = 0;
        for (uint32_t j = 0; j < width; ++j)
            if ((v >> (width - 1 - j)) & 1u) packed |= 1u << j;
        out.push_back(packed);
    }
    return out;
}

namespace {

/// Trace symbol from packed transducer output/input valuations: the spec
/// alphabet is inputs then outputs.
Valuation to_symbol(const Spec& spec, Valuation packed_output,
                    Valuation packed_input) {
    return packed_input |
           (packed_output << static_cast<uint32_t>(spec.inputs.size()));
}

GoalSet satisfied_goals(const Spec& spec, const Trace& trace) {
    if (trace.empty()) return 0;
    Alphabet alphabet = spec.alphabet();
    GoalSet out = 0;
    for (uint32_t i = 0; i < spec.goals.size(); ++i)
        if (evaluate(*spec.factory, alphabet, trace, spec.goals[i].formula, 0))
            out |= 1u << i;
    return out;
}

bool transducer_matches_spec(const Spec& spec, const Transducer& t) {
    return t.inputs == spec.inputs && t.outputs == spec.outputs;
}

}  // namespace

SimResult simulate(const Spec& spec, const Transducer& t, const EnvPolicy& env,
                   uint32_t max_rounds) {
    SimResult result;
    if (!transducer_matches_spec(spec, t)) {
        result.verdict = Verdict::kStrategyError;
        result.message = "transducer alphabet does not match the spec";
        return result;
    }
    if (env.kind == EnvPolicy::Kind::kExhaustive) {
        // Exhaustive simulation delegates to the verifier; the verdict is
        // the goal set guaranteed on every branch.
        VerifyResult v = verify_exhaustive(spec, t, 0, std::max(env.depth, 1u));
        if (!v.ok) {
            result.verdict = Verdict::kBudgetExceeded;
            result.message = "some environment branch does not finish";
            return result;
        }
        if (t.is_done(t.initial)) {
            result.verdict = Verdict::kVacuous;
        } else {
            result.satisfied = v.guaranteed;
            result.verdict = Verdict::kSatisfied;
        }
        return result;
    }

    std::mt19937_64 rng(env.seed);
    const uint32_t num_inputs = static_cast<uint32_t>(spec.inputs.size());
    const Valuation input_mask = (1u << num_inputs) - 1;

    uint32_t q = t.initial;
    for (uint32_t round = 0;; ++round) {
        if (t.is_done(q)) {
            result.rounds = round;
            if (result.trace.empty()) {
                result.verdict = Verdict::kVacuous;
            } else {
                result.satisfied = satisfied_goals(spec, result.trace);
                result.verdict = Verdict::kSatisfied;
            }
            return result;
        }
        if (round >= max_rounds) {
            result.rounds = round;
            result.verdict = Verdict::kBudgetExceeded;
            result.message = "round budget exhausted before done";
            return result;
        }
        Valuation x;
        if (env.kind == EnvPolicy::Kind::kScripted) {
            if (round >= env.script.size()) {
                result.rounds = round;
                result.verdict = Verdict::kBudgetExceeded;
                result.message = "scripted inputs exhausted before done";
                return result;
            }
            x = env.script[round] & input_mask;
        } else {
            x = static_cast<Valuation>(rng()) & input_mask;
        }
        Valuation y = *t.states[q].output;
        result.trace.push_back(to_symbol(spec, y, x));
        if (x >= t.states[q].next.size() ||
            t.states[q].next[x] == UINT32_MAX) {
            result.rounds = round + 1;
            result.verdict = Verdict::kStrategyError;
            result.message = "transducer has no transition for the input";
            return result;
        }
        q = t.states[q].next[x];
    }
}

namespace {

struct BranchOutcome {
    bool ok = true;
    GoalSet guaranteed;
    std::vector<Valuation> counterexample;
    bool has_counterexample = false;
};

/// Depth-first sweep in lexicographic input order. Returns false as soon as
/// a branch fails; `path` then holds the failing prefix.
bool dfs_verify(const Spec& spec, const Transducer& t, GoalSet target,
                uint32_t depth, uint32_t q, Trace& trace,
                std::vector<Valuation>& path,
                const std::vector<Valuation>& inputs_lex, GoalSet& guaranteed) {
    if (t.is_done(q)) {
        GoalSet sat = satisfied_goals(spec, trace);
        guaranteed &= sat;
        return (sat & target) == target;
    }
    if (path.size() >= depth) return false;
    Valuation y = *t.states[q].output;
    for (Valuation x : inputs_lex) {
        if (x >= t.states[q].next.size() || t.states[q].next[x] == UINT32_MAX)
            return false;
        path.push_back(x);
        trace.push_back(to_symbol(spec, y, x));
        if (!dfs_verify(spec, t, target, depth, t.states[q].next[x], trace,
                        path, inputs_lex, guaranteed))
            return false;
        trace.pop_back();
        path.pop_back();
    }
    return true;
}

}  // namespace

VerifyResult verify_exhaustive(const Spec& spec, const Transducer& t,
                               GoalSet set, uint32_t depth, bool parallel) {
    VerifyResult result;
    result.guaranteed = spec.goals.empty()
                            ? 0
                            : static_cast<GoalSet>((1ull << spec.goals.size()) - 1);
    if (!transducer_matches_spec(spec, t)) {
        result.ok = false;
        result.counterexample = std::vector<Valuation>{};
        result.guaranteed = 0;
        return result;
    }
    const uint32_t num_inputs = static_cast<uint32_t>(spec.inputs.size());
    std::vector<Valuation> inputs_lex = lex_packed(num_inputs);

    if (t.is_done(t.initial)) {
        // Empty trace: satisfies nothing; passes only the empty target.
        result.guaranteed = 0;
        result.ok = set == 0;
        if (!result.ok) result.counterexample = std::vector<Valuation>{};
        return result;
    }

    // One branch per first input choice; branches are disjoint lexicographic
    // ranges, so the first failing branch carries the first counterexample.
    const size_t branches = inputs_lex.size();
    std::vector<BranchOutcome> outcomes(branches);
    Valuation y0 = *t.states[t.initial].output;

    auto run_branch = [&](size_t b) {
        BranchOutcome& out = outcomes[b];
        out.guaranteed = result.guaranteed;
        Valuation x = inputs_lex[b];
        if (x >= t.states[t.initial].next.size() ||
            t.states[t.initial].next[x] == UINT32_MAX) {
            out.ok = false;
            out.counterexample = {x};
            out.has_counterexample = true;
            return;
        }
        Trace trace{to_symbol(spec, y0, x)};
        std::vector<Valuation> path{x};
        if (!dfs_verify(spec, t, set, depth, t.states[t.initial].next[x], trace,
                        path, inputs_lex, out.guaranteed)) {
            out.ok = false;
            out.counterexample = path;
            out.has_counterexample = true;
        }
    };

#ifdef _OPENMP
    if (parallel && branches > 1) {
#pragma omp parallel for schedule(dynamic)
        for (size_t b = 0; b < branches; ++b) run_branch(b);
    } else {
        for (size_t b = 0; b < branches; ++b) run_branch(b);
    }
#else
    (void)parallel;
    for (size_t b = 0; b < branches; ++b) run_branch(b);
#endif

    result.ok = true;
    for (size_t b = 0; b < branches; ++b) {
        result.guaranteed &= outcomes[b].guaranteed;
        if (!outcomes[b].ok && result.ok) {
            result.ok = false;
            result.counterexample = outcomes[b].counterexample;
        }
    }
    if (result.ok) result.counterexample.reset();
    return result;
}

std::string trace_dump(const Spec& spec, const Transducer& t,
                       const SimResult& result) {
    std::ostringstream os;
    const uint32_t ni = static_cast<uint32_t>(spec.inputs.size());
    uint32_t q = t.initial;
    for (size_t i = 0; i < result.trace.size(); ++i) {
        Valuation sym = result.trace[i];
        os << "round " << i << ": Y={";
        bool first = true;
        for (size_t j = 0; j < spec.outputs.size(); ++j) {
            if (!((sym >> (ni + j)) & 1u)) continue;
            if (!first) os << ",";
            os << spec.outputs[j];
            first = false;
        }
        os << "} X={";
        first = true;
        for (size_t j = 0; j < spec.inputs.size(); ++j) {
            if (!((sym >> j) & 1u)) continue;
            if (!first) os << ",";
            os << spec.inputs[j];
            first = false;
        }
        os << "} state=q" << q << "\n";
        Valuation x = sym & ((1u << ni) - 1);
        if (t.is_done(q) || x >= t.states[q].next.size()) break;
        q = t.states[q].next[x];
    }
    return os.str();
}

} // namespace mpsynth
