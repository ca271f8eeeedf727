#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpsynth/arena.hpp"
#include "mpsynth/bdd.hpp"
#include "mpsynth/formula.hpp"

namespace mpsynth {

enum class SubsetVerdict { kRealizable, kUnrealizable, kPruned, kUnknown };

struct SubsetRecord {
    GoalSet set = 0;
    SubsetVerdict verdict = SubsetVerdict::kUnknown;
    double time_ms = 0.0;
    GoalSet pruned_by = 0;  // meaningful when verdict == kPruned
};

/// Result of the pruned-enumeration baseline.
struct EnumReport {
    std::vector<GoalSet> maximal;  // at the initial product state, label-lex
    uint64_t checked = 0;
    uint64_t pruned = 0;
    uint64_t realizable_count = 0;
    std::vector<SubsetRecord> rows;
    bool complete = true;
};

enum class SolveMode { kSymbolic, kExplicit };

struct EnumOpts {
    SolveMode mode = SolveMode::kSymbolic;
    bool parallel = true;
    size_t node_ceiling = BddEngine::kDefaultNodeCeiling;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Per-subset single-property synthesis, subsets by ascending size then
/// lexicographic label order, pruning supersets of unrealizable sets. Each
/// subset is solved as the conjunction of its goals (symbolic by default).
/// Unpruned subsets within one size class are independent and may be solved
/// in parallel; verdicts and rows are deterministic either way.
EnumReport enumerate_maximal(const Spec& spec, const std::vector<Dfa>& dfas,
                             const EnumOpts& opts = {});

/// CSV rows: labels,verdict,time_ms,pruned_by (header included).
std::string enum_report_to_csv(const EnumReport& report,
                               const std::vector<std::string>& goal_labels);

} // namespace mpsynth
