#pragma once

#include <string>

#include "mpsynth/explicit_solver.hpp"
#include "mpsynth/formula.hpp"

namespace mpsynth::testing {

/// Recurrence-style finite-trace evaluator, independent of the library's
/// clause-by-clause evaluate(). Used as the bulk semantic oracle.
bool eval_backward(const FormulaFactory& factory, const Alphabet& alphabet,
                   const Trace& trace, Formula f);

/// Exhaustively checks dfa_accepts(build(f)) == semantics over all traces of
/// length 1..max_len. Returns false and fills `mismatch` on the first
/// disagreement.
bool dfa_matches_semantics(const Dfa& dfa, const FormulaFactory& factory,
                           Formula f, const Alphabet& alphabet,
                           uint32_t max_len, std::string* mismatch = nullptr);

/// Batched multi-property fixed point, literally WinM_{i+1} = WinM_i u
/// PreMC(WinM_i), with ranks. Reference for the worklist implementation.
WinRelation win_m_batched(const ProductArena& arena);

} // namespace mpsynth::testing
