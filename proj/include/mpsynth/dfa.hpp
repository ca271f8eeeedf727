#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mpsynth/formula.hpp"

namespace mpsynth {

/// Explicit DFA over 2^AP with a dense transition table. State numbering is
/// canonical (BFS order from the initial state) so equal languages built the
/// same way yield byte-identical dumps.
struct Dfa {
    Alphabet alphabet;
    uint32_t num_states = 0;
    uint32_t initial = 0;
    std::vector<uint32_t> delta;  // num_states * num_symbols, row-major
    std::vector<char> finals;     // one flag per state

    uint32_t num_symbols() const { return alphabet.num_symbols(); }
    uint32_t step(uint32_t state, Valuation sym) const {
        return delta[static_cast<size_t>(state) * num_symbols() + sym];
    }
    bool is_final(uint32_t state) const { return finals[state] != 0; }
};

/// Default cap on derivative construction states. The doubly-exponential
/// worst case fails loudly instead of hanging.
constexpr uint32_t kDefaultStateCap = 1u << 20;

/// Acceptance of the empty remainder: acc(true)=T, acc(atom)=F, acc(X)=F,
/// acc(WX)=T, acc(a U b)=acc(b), Boolean operators homomorphic.
/// Requires a core-operator formula.
bool eps_accept(const FormulaFactory& factory, Formula f);

/// One-step obligation rewriting: the residual that the remaining suffix
/// must satisfy after consuming `sym`. Requires a core-operator formula.
Formula derive(FormulaFactory& factory, Formula f, Valuation sym,
               const Alphabet& alphabet);

/// Satisfaction of `f` on the single-position trace [sym]; equals
/// eps_accept after substituting atoms by their value under sym.
bool last_sat(FormulaFactory& factory, Formula f, Valuation sym,
              const Alphabet& alphabet);

/// Compiles a formula to the minimal DFA accepting exactly its non-empty
/// satisfying traces over 2^alphabet. The alphabet must cover the formula's
/// atoms and hold at most 16 atoms (dense tables).
Dfa build_dfa(FormulaFactory& factory, Formula f, const Alphabet& alphabet,
              uint32_t state_cap = kDefaultStateCap);

/// Hopcroft partition refinement after reachable-state restriction;
/// canonical BFS renumbering.
Dfa minimize(const Dfa& d);

/// Runs the DFA over a trace; the empty trace is never accepted.
bool dfa_accepts(const Dfa& d, const Trace& trace);

/// Reindexes a DFA onto a larger alphabet containing its own; the language
/// becomes the inverse projection (added atoms are don't-cares).
Dfa lift_dfa(const Dfa& d, const Alphabet& full);

/// True iff the two DFAs are isomorphic under their canonical numbering
/// (same shape, same finals, same transitions).
bool dfa_isomorphic(const Dfa& a, const Dfa& b);

/// GraphViz dump; edges grouped per target and labeled with Boolean cubes.
std::string dfa_to_dot(const Dfa& d);

/// The atoms of one goal formula, in spec declaration order.
Alphabet goal_alphabet(const Spec& spec, Formula f);

/// Minimal DFAs for all goals, each over its own sub-alphabet. Keeping the
/// alphabets per-goal is what lets the symbolic pipeline handle specs whose
/// combined alphabet exceeds the dense-table limit.
std::vector<Dfa> build_goal_dfas(const Spec& spec,
                                 uint32_t state_cap = kDefaultStateCap);

/// The goal DFAs lifted to the full shared alphabet (explicit pipeline,
/// |AP| <= 16).
std::vector<Dfa> lift_goal_dfas(const Spec& spec, const std::vector<Dfa>& dfas);

} // namespace mpsynth
