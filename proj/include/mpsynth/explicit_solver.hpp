#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpsynth/arena.hpp"

namespace mpsynth {

/// Set of (state, goal-set) pairs over one arena, stored densely.
class PairRel {
public:
    PairRel() = default;
    PairRel(uint32_t num_states, uint32_t num_goals);

    bool test(uint32_t state, GoalSet set) const;
    void set(uint32_t state, GoalSet set);
    size_t count() const;
    uint32_t num_states() const { return num_states_; }
    uint32_t num_goals() const { return num_goals_; }

    bool operator==(const PairRel&) const = default;
    bool subset_of(const PairRel& other) const;
    PairRel union_with(const PairRel& other) const;

private:
    size_t word_index(uint32_t state, GoalSet set) const {
        size_t bit = static_cast<size_t>(state) * (1u << num_goals_) + set;
        return bit;
    }

    uint32_t num_states_ = 0;
    uint32_t num_goals_ = 0;
    std::vector<uint64_t> bits_;
};

/// Multi-property winning relation plus fixed-point ranks: rank(s,C) is the
/// least iteration at which (s,C) entered the relation.
struct WinRelation {
    PairRel rel;
    std::vector<uint32_t> rank;  // dense: state * 2^n + C, UINT32_MAX absent
    uint32_t iterations = 0;     // layers until stabilization

    uint32_t get_rank(uint32_t state, GoalSet set, uint32_t num_goals) const {
        return rank[static_cast<size_t>(state) * (1u << num_goals) + set];
    }
};

/// Per-state antichains of subset-maximal realizable goal sets, each sorted
/// by ascending label list (lexicographic).
struct MaxRelation {
    uint32_t num_goals = 0;
    std::vector<std::vector<GoalSet>> sets;  // per state
    uint32_t iterations = 0;

    bool operator==(const MaxRelation& o) const {
        return num_goals == o.num_goals && sets == o.sets;
    }
};

/// Finite-state winning strategy. A state either emits an output valuation
/// and has one successor per input valuation, or is a done state.
struct Transducer {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;

    struct State {
        std::optional<Valuation> output;  // nullopt = done (over output atoms)
        std::vector<uint32_t> next;       // indexed by input valuation; empty if done
    };

    uint32_t initial = 0;
    std::vector<State> states;

    bool is_done(uint32_t q) const { return !states[q].output.has_value(); }
};

/// Compares goal sets as ascending label-index lists (lexicographic).
bool goal_set_lex_less(GoalSet a, GoalSet b);

/// Single-property game bits: winning set, ranks and a move map on a DFA
/// used as the arena (agent picks outputs, then environment inputs).
struct SingleSolve {
    std::vector<char> winning;
    std::vector<uint32_t> rank;             // UINT32_MAX when losing
    std::vector<std::optional<Valuation>> move;  // lex-least rank-decreasing output
    bool realizable = false;
    uint32_t iterations = 0;
};

/// One-step controllable predecessor on a DFA arena:
/// { s : exists Y forall X. delta(s, Y u X) in target }.
std::vector<char> pre_c(const Dfa& game, IoSplit split,
                        const std::vector<char>& target);

/// Least fixed point of Win_0 = F, Win_{i+1} = Win_i u PreC(Win_i).
SingleSolve solve_single(const Dfa& game, IoSplit split);

/// Controllable multi-property predecessor:
/// { (s,C) : exists Y forall X. (delta(s,Y u X), C) in rel }.
PairRel pre_mc(const ProductArena& arena, const PairRel& rel);

constexpr uint32_t kDefaultExplicitGoalCap = 12;

/// Least fixed point of WinM_0 u PreMC, with ranks, via a layered worklist
/// (semantics identical to the batched iteration).
WinRelation win_m(const ProductArena& arena,
                  uint32_t goal_cap = kDefaultExplicitGoalCap);

/// Per-state subset-maximal antichain of the input pairs.
MaxRelation max_op(const ProductArena& arena, const PairRel& rel);

/// Maximal multi-property predecessor:
/// { (s,C) : exists Y forall X exists D >= C. (delta(s,Y u X), D) in m }.
PairRel pre_mmc(const ProductArena& arena, const MaxRelation& m);

/// Fixed point of Max(WinMM_i u PreMMC(WinMM_i)).
MaxRelation win_mm(const ProductArena& arena,
                   uint32_t goal_cap = kDefaultExplicitGoalCap);

/// Expands an antichain relation to all subsets of its elements.
PairRel downward_close(const ProductArena& arena, const MaxRelation& m);

/// Winning transducer for goal set C from the winning relation. Output
/// choice: lexicographically least valuation forcing a rank decrease.
/// States are restricted to those reachable under the strategy; play stops
/// at the first C-satisfying state.
Transducer extract_strategy(const ProductArena& arena, const WinRelation& w,
                            GoalSet C);

/// Exhaustive minimax: C reachable-and-satisfiable within `horizon` rounds
/// against every environment. Independent of the fixed-point solvers.
bool oracle_realizable(const ProductArena& arena, GoalSet C, uint32_t horizon,
                       uint32_t from_state);
bool oracle_realizable(const ProductArena& arena, GoalSet C, uint32_t horizon);

/// Deterministic JSON dump of a winning relation (states in index order,
/// goal sets as sorted label lists).
std::string win_relation_to_json(const ProductArena& arena,
                                 const WinRelation& w,
                                 const std::vector<std::string>& goal_labels);
std::string max_relation_to_json(const MaxRelation& m,
                                 const std::vector<std::string>& goal_labels);

} // namespace mpsynth
