#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mpsynth/dfa.hpp"

namespace mpsynth {

/// Goal subset as a bitmask: bit i set iff goal i is in the set.
using GoalSet = uint32_t;

constexpr uint32_t kMaxGoals = 30;

/// Which alphabet bits the environment (inputs) and the agent (outputs)
/// control. The two masks partition the alphabet.
struct IoSplit {
    Valuation input_mask = 0;
    Valuation output_mask = 0;

    uint32_t num_inputs() const { return __builtin_popcount(input_mask); }
    uint32_t num_outputs() const { return __builtin_popcount(output_mask); }
};

/// Valuations of the masked bits in lexicographic order of the atom tuple
/// (atoms ascending by alphabet position, false < true).
std::vector<Valuation> lex_valuations(Valuation mask);

/// Reachable component-wise product of n DFAs sharing one alphabet.
/// States are interned in BFS order, giving deterministic indices.
struct ProductArena {
    Alphabet alphabet;
    IoSplit split;
    uint32_t num_goals = 0;
    std::vector<uint32_t> component_sizes;
    uint32_t num_states = 0;
    uint32_t initial = 0;
    std::vector<uint32_t> delta;               // num_states * num_symbols
    std::vector<GoalSet> sat;                  // per state: accepting components
    std::vector<std::vector<uint32_t>> tuples; // per state: component states

    uint32_t num_symbols() const { return alphabet.num_symbols(); }
    uint32_t step(uint32_t state, Valuation sym) const {
        return delta[static_cast<size_t>(state) * num_symbols() + sym];
    }

    /// The unique maximal goal set C with s |= C; s |= C' iff C' is a subset.
    GoalSet sat_goals(uint32_t state) const { return sat[state]; }

    GoalSet all_goals() const {
        return static_cast<GoalSet>((1ull << num_goals) - 1);
    }
};

constexpr uint32_t kDefaultProductCap = 1u << 22;

/// Builds the reachable product arena. All DFAs must share one alphabet;
/// 1 <= n <= 30.
ProductArena build_product(const std::vector<Dfa>& dfas, IoSplit split,
                           uint32_t state_cap = kDefaultProductCap);

/// DOT dump with each state annotated by its satisfied-goal set.
std::string arena_to_dot(const ProductArena& arena,
                         const std::vector<std::string>& goal_labels);

/// Renders a goal set as sorted labels, e.g. {g1,g3}.
std::string goal_set_to_string(GoalSet set,
                               const std::vector<std::string>& goal_labels);

} // namespace mpsynth
