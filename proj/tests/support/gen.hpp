#pragma once

#include <random>
#include <string>
#include <vector>

#include "mpsynth/dfa.hpp"
#include "mpsynth/formula.hpp"

namespace mpsynth::testing {

/// Random formula over the given atoms, any operator, bounded depth.
Formula random_formula(FormulaFactory& factory, std::mt19937_64& rng,
                       const std::vector<std::string>& atoms, uint32_t depth);

/// Random non-empty trace over num_atoms bits.
Trace random_trace(std::mt19937_64& rng, uint32_t num_atoms, uint32_t max_len);

/// Random total DFA with a non-accepting initial state.
Dfa random_dfa(std::mt19937_64& rng, const Alphabet& alphabet,
               uint32_t num_states);

/// Random spec: goals are random formulas over x0..,y0.. atoms.
Spec random_spec(std::mt19937_64& rng, uint32_t num_goals, uint32_t num_inputs,
                 uint32_t num_outputs, uint32_t depth);

} // namespace mpsynth::testing
