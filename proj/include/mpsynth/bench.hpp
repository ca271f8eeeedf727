#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpsynth/arena.hpp"
#include "mpsynth/formula.hpp"

namespace mpsynth {

enum class Family { kChain, kUntil, kNext, kCounter, kRobotnav };

std::optional<Family> family_from_string(const std::string& name);
std::string family_to_string(Family family);

/// Deterministic generator parameters: generation is a pure function of
/// (family, n, d, seed).
struct FamilyParams {
    Family family = Family::kChain;
    uint32_t n = 1;  // goal count
    uint32_t d = 1;  // depth / length parameter
    uint64_t seed = 0;
};

/// Emits .mpl spec text for the family instance.
std::string generate(const FamilyParams& params);

/// Head-to-head comparison of the one-pass symbolic pipeline against the
/// pruned enumeration baseline.
struct ComparisonReport {
    std::string family;
    uint32_t n = 0;
    uint32_t d = 0;
    uint64_t states = 0;      // explicit reachable count when feasible,
    bool states_exact = false;  // otherwise the full product bound
    double mpsynth_fixpoint_ms = 0.0;
    double mpsynth_extract_ms = 0.0;
    double enum_ms = 0.0;
    bool with_enum = false;
    std::vector<GoalSet> mpsynth_maximal;
    std::vector<GoalSet> enum_maximal;
    bool agree = false;
    bool timed_out = false;
};

struct CompareOpts {
    bool with_enum = true;
    double timeout_seconds = 0.0;  // 0 = none
    size_t node_ceiling = 0;       // 0 = engine default
};

ComparisonReport run_comparison(const Spec& spec, const std::string& family,
                                uint32_t n, uint32_t d,
                                const CompareOpts& opts = {});

/// CSV schema: family,n,d,states,mpsynth_fixpoint_ms,mpsynth_extract_ms,enum_ms,agree
std::string comparison_csv_header();
std::string comparison_csv_row(const ComparisonReport& report);

} // namespace mpsynth
