#include "mpsynth/enumeration.hpp"

#include <algorithm>
#include <sstream>

#include "mpsynth/errors.hpp"
#include "mpsynth/explicit_solver.hpp"
#include "mpsynth/symbolic.hpp"

namespace mpsynth {

namespace {

/// k-combinations of 0..n-1 in lexicographic order over positions.
std::vector<std::vector<uint32_t>> combinations(uint32_t n, uint32_t k) {
    std::vector<std::vector<uint32_t>> out;
    std::vector<uint32_t> idx(k);
    for (uint32_t i = 0; i < k; ++i) idx[i] = i;
    if (k > n) return out;
    while (true) {
        out.push_back(idx);
        int i = static_cast<int>(k) - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (uint32_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

bool solve_subset_symbolic(const Spec& spec, const std::vector<Dfa>& dfas,
                           GoalSet set, const EnumOpts& opts) {
    std::vector<Dfa> components;
    for (uint32_t i = 0; i < spec.goals.size(); ++i)
        if ((set >> i) & 1u) components.push_back(dfas[i]);
    BddEngine engine(opts.node_ceiling);
    SymbolicArena arena =
        encode(components, spec.inputs, spec.outputs, engine);
    FixpointOpts fp;
    fp.deadline = opts.deadline;
    WinningFormulas wf = solve_conjunction(arena, fp);
    std::vector<int8_t> assign(engine.num_vars(), -1);
    for (uint32_t i = 0; i < arena.num_goals; ++i)
        for (size_t b = 0; b < arena.state_vars[i].size(); ++b)
            assign[arena.state_vars[i][b]] = (arena.initial_tuple[i] >> b) & 1u;
    return engine.evaluate(wf.w, assign);
}

bool solve_subset_explicit(const Spec& spec, const std::vector<Dfa>& dfas,
                           GoalSet set) {
    std::vector<Dfa> components;
    for (uint32_t i = 0; i < spec.goals.size(); ++i)
        if ((set >> i) & 1u) components.push_back(lift_dfa(dfas[i], spec.alphabet()));
    IoSplit split{spec.input_mask(), spec.output_mask()};
    ProductArena arena = build_product(components, split);
    // Joint acceptance as a single-property reachability game.
    Dfa game;
    game.alphabet = arena.alphabet;
    game.num_states = arena.num_states;
    game.initial = arena.initial;
    game.delta = arena.delta;
    game.finals.resize(arena.num_states);
    GoalSet everything = arena.all_goals();
    for (uint32_t s = 0; s < arena.num_states; ++s)
        game.finals[s] = arena.sat_goals(s) == everything;
    return solve_single(game, split).realizable;
}

}  // namespace

EnumReport enumerate_maximal(const Spec& spec, const std::vector<Dfa>& dfas,
                             const EnumOpts& opts) {
    const uint32_t n = static_cast<uint32_t>(spec.goals.size());
    if (n > 20)
        throw ResourceError("enumeration baseline limited to 20 goals");

    EnumReport report;

    // Goal positions ordered by label; subset visit order is ascending size,
    // then lexicographic over the sorted labels.
    std::vector<uint32_t> by_label(n);
    for (uint32_t i = 0; i < n; ++i) by_label[i] = i;
    std::sort(by_label.begin(), by_label.end(),
              [&](uint32_t a, uint32_t b) {
                  return spec.goals[a].label < spec.goals[b].label;
              });

    std::vector<GoalSet> unrealizable;
    std::vector<GoalSet> realizable;

    for (uint32_t size = 1; size <= n; ++size) {
        std::vector<GoalSet> candidates;
        for (const auto& combo : combinations(n, size)) {
            GoalSet set = 0;
            for (uint32_t pos : combo) set |= 1u << by_label[pos];
            candidates.push_back(set);
        }

        // Prune against smaller unrealizable sets; same-size sets cannot
        // prune each other, so the survivors are independent.
        std::vector<SubsetRecord> size_rows(candidates.size());
        std::vector<size_t> to_solve;
        for (size_t ci = 0; ci < candidates.size(); ++ci) {
            GoalSet set = candidates[ci];
            size_rows[ci].set = set;
            GoalSet blocker = 0;
            bool blocked = false;
            for (GoalSet u : unrealizable) {
                if ((set & u) == u) {
                    blocked = true;
                    blocker = u;
                    break;
                }
            }
            if (blocked) {
                size_rows[ci].verdict = SubsetVerdict::kPruned;
                size_rows[ci].pruned_by = blocker;
            } else {
                to_solve.push_back(ci);
            }
        }

        std::exception_ptr failure;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (opts.parallel && to_solve.size() > 1)
#endif
        for (size_t i = 0; i < to_solve.size(); ++i) {
            SubsetRecord& rec = size_rows[to_solve[i]];
            auto start = std::chrono::steady_clock::now();
            try {
                bool ok = opts.mode == SolveMode::kSymbolic
                              ? solve_subset_symbolic(spec, dfas, rec.set, opts)
                              : solve_subset_explicit(spec, dfas, rec.set);
                rec.verdict = ok ? SubsetVerdict::kRealizable
                                 : SubsetVerdict::kUnrealizable;
            } catch (const ResourceError&) {
                rec.verdict = SubsetVerdict::kUnknown;
            } catch (const TimeoutError&) {
                rec.verdict = SubsetVerdict::kUnknown;
            } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
                if (!failure) failure = std::current_exception();
            }
            rec.time_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count();
        }
        if (failure) std::rethrow_exception(failure);

        for (SubsetRecord& rec : size_rows) {
            if (rec.verdict == SubsetVerdict::kPruned) {
                ++report.pruned;
            } else {
                ++report.checked;
                if (rec.verdict == SubsetVerdict::kRealizable) {
                    ++report.realizable_count;
                    realizable.push_back(rec.set);
                } else if (rec.verdict == SubsetVerdict::kUnrealizable) {
                    unrealizable.push_back(rec.set);
                } else {
                    report.complete = false;
                }
            }
            report.rows.push_back(rec);
        }
    }

    // Subset-maximal realizable sets; the empty set stands in when nothing
    // else is realizable.
    for (GoalSet c : realizable) {
        bool dominated = false;
        for (GoalSet d : realizable)
            if (d != c && (c & d) == c) {
                dominated = true;
                break;
            }
        if (!dominated) report.maximal.push_back(c);
    }
    if (report.maximal.empty()) report.maximal.push_back(0);
    std::sort(report.maximal.begin(), report.maximal.end(), goal_set_lex_less);
    return report;
}

std::string enum_report_to_csv(const EnumReport& report,
                               const std::vector<std::string>& goal_labels) {
    std::ostringstream os;
    os << "labels,verdict,time_ms,pruned_by\n";
    for (const SubsetRecord& rec : report.rows) {
        os << '"' << goal_set_to_string(rec.set, goal_labels) << "\",";
        switch (rec.verdict) {
            case SubsetVerdict::kRealizable: os << "realizable"; break;
            case SubsetVerdict::kUnrealizable: os << "unrealizable"; break;
            case SubsetVerdict::kPruned: os << "pruned"; break;
            case SubsetVerdict::kUnknown: os << "unknown"; break;
        }
        os << ',';
        if (rec.verdict == SubsetVerdict::kRealizable ||
            rec.verdict == SubsetVerdict::kUnrealizable ||
            rec.verdict == SubsetVerdict::kUnknown)
            os << rec.time_ms;
        os << ',';
        if (rec.verdict == SubsetVerdict::kPruned)
            os << '"' << goal_set_to_string(rec.pruned_by, goal_labels) << '"';
        os << '\n';
    }
    return os.str();
}

} // namespace mpsynth
