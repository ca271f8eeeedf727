#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "mpsynth/arena.hpp"
#include "mpsynth/bdd.hpp"
#include "mpsynth/explicit_solver.hpp"

namespace mpsynth {

enum class VarOrderPreset { kDefault, kInterleaved };

/// Symbolic multi-property arena: per-goal binary state variable blocks,
/// per-bit transition functions over X u Y u Z, per-goal acceptance
/// functions over the goal's own block, and one goal variable per goal.
struct SymbolicArena {
    BddEngine* engine = nullptr;
    uint32_t num_goals = 0;
    std::vector<uint32_t> component_sizes;
    std::vector<uint32_t> initial_tuple;           // component initial states
    std::vector<std::vector<uint32_t>> state_vars; // Z_i, little-endian bits
    std::vector<uint32_t> goal_vars;               // K
    std::vector<uint32_t> output_vars;             // Y, declared order
    std::vector<uint32_t> input_vars;              // X, declared order
    std::vector<std::vector<BoolFn>> transition;   // per goal, per state bit
    std::vector<BoolFn> acceptance;                // f_i over Z_i

    std::vector<uint32_t> flat_state_vars() const;
    std::vector<std::pair<uint32_t, BoolFn>> transition_bindings() const;

    /// Assignment covering Z (from a component-state tuple) and K (from a
    /// goal set); other variables left unassigned.
    std::vector<int8_t> state_assignment(const std::vector<uint32_t>& tuple,
                                         GoalSet set) const;

    /// Constant bindings Z := encoding of the tuple.
    std::vector<std::pair<uint32_t, BoolFn>> state_bindings(
        const std::vector<uint32_t>& tuple) const;
    std::vector<std::pair<uint32_t, BoolFn>> goal_bindings(GoalSet set) const;

    /// Steps a concrete tuple by evaluating the transition functions.
    std::vector<uint32_t> step_tuple(const std::vector<uint32_t>& tuple,
                                     Valuation packed_output,
                                     Valuation packed_input) const;

    /// Full product size bound (Pi |S_i|), saturating.
    uint64_t full_product_bound() const;
};

/// Encodes component DFAs into a fresh engine. Each DFA's alphabet must be
/// a subset of inputs u outputs; states are encoded in binary little-endian
/// over the goal's block, numbered by the dfa module's canonical order.
SymbolicArena encode(const std::vector<Dfa>& dfas,
                     const std::vector<std::string>& inputs,
                     const std::vector<std::string>& outputs, BddEngine& engine,
                     VarOrderPreset order = VarOrderPreset::kDefault);

/// w0(Z,K) = AND_i (k_i => f_i(Z_i)): the state satisfies every goal the
/// K assignment selects. The implication shape is what lets one function
/// cover all 2^n goal subsets at once.
BoolFn initial_winning(const SymbolicArena& arena);

struct WinningFormulas {
    BoolFn w0;  // over Z u K (or Z for the conjunction variant)
    BoolFn w;   // winning states, = exists Y. t
    BoolFn t;   // winning moves over Z u Y u K
    uint32_t iterations = 0;
    std::vector<size_t> live_nodes_per_iter;
};

struct FixpointOpts {
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// The multi-property symbolic fixed point:
///   t_{i+1} = t_i or (!w_i and forall X. w_i(eta(X,Y,Z), K))
///   w_{i+1} = exists Y. t_{i+1}
/// iterated to id-equality of w.
WinningFormulas symbolic_fixpoint(const SymbolicArena& arena,
                                  const FixpointOpts& opts = {});

/// Single-property iteration on the conjunction of all components:
/// identical loop seeded with w0 = AND_i f_i (no goal variables).
WinningFormulas solve_conjunction(const SymbolicArena& arena,
                                  const FixpointOpts& opts = {});

bool query_realizable(const WinningFormulas& wf, const SymbolicArena& arena,
                      const std::vector<uint32_t>& tuple, GoalSet set);
bool query_realizable_initial(const WinningFormulas& wf,
                              const SymbolicArena& arena, GoalSet set);

/// All subset-maximal realizable goal sets at a state: restrict w to the
/// state, then repeat pick / greedy-flip ascending / block with the clause
/// OR_{i not in M} k_i until unsatisfiable. Sorted by ascending label list.
std::vector<GoalSet> maximal_assignments(const WinningFormulas& wf,
                                         const SymbolicArena& arena,
                                         const std::vector<uint32_t>& tuple);

/// The maximum-cardinality maximal set; ties broken by least label list.
GoalSet maximum_assignment(const WinningFormulas& wf,
                           const SymbolicArena& arena,
                           const std::vector<uint32_t>& tuple);

/// Strategy for goal set C: fixes K := C in t, determinizes outputs by a
/// false-preferring walk per output in declared order, and materializes the
/// reachable states into an explicit transducer (done where w0 holds).
Transducer symbolic_strategy(const WinningFormulas& wf,
                             const SymbolicArena& arena, GoalSet set);

/// Same extraction for the conjunction variant (baseline path).
Transducer conjunction_strategy(const WinningFormulas& wf,
                                const SymbolicArena& arena);

} // namespace mpsynth
