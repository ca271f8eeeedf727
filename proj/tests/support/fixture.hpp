#pragma once

#include "mpsynth/arena.hpp"
#include "mpsynth/formula.hpp"

namespace mpsynth::testing {

/// Hand-built 4-state arena with two effective moves at the start state:
/// the y1 move forks on input x1 into a state satisfying all three goals or
/// one satisfying goals {1,2}; the y2 move forces a state satisfying {2,3}.
/// Output valuations with both or neither y set loop at the start.
/// The spec carries goal formulas with exactly the component languages, so
/// trace-level checks work against the same instance.
struct BranchFixture {
    Spec spec;                    // inputs x1 x2, outputs y1 y2, goals g1..g3
    std::vector<Dfa> components;  // hand-built 4-state DFAs (shared alphabet)
    ProductArena arena;
    uint32_t s0 = 0, s1 = 0, s2 = 0, s3 = 0;  // arena state indices
};

BranchFixture make_branch_fixture();

/// The same instance as .mpl text (for parser/CLI-level tests).
std::string branch_fixture_mpl();

} // namespace mpsynth::testing
