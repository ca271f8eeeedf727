#include "mpsynth/bench.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <sstream>

#include "mpsynth/dfa.hpp"
#include "mpsynth/enumeration.hpp"
#include "mpsynth/errors.hpp"
#include "mpsynth/symbolic.hpp"

namespace mpsynth {

std::optional<Family> family_from_string(const std::string& name) {
    if (name == "chain") return Family::kChain;
    if (name == "until") return Family::kUntil;
    if (name == "next") return Family::kNext;
    if (name == "counter") return Family::kCounter;
    if (name == "robotnav") return Family::kRobotnav;
    return std::nullopt;
}

std::string family_to_string(Family family) {
    switch (family) {
        case Family::kChain: return "chain";
        case Family::kUntil: return "until";
        case Family::kNext: return "next";
        case Family::kCounter: return "counter";
        case Family::kRobotnav: return "robotnav";
    }
    return "?";
}

namespace {

uint32_t bits_for_count(uint32_t count) {
    uint32_t bits = 0;
    while ((1u << bits) < count) ++bits;
    return std::max(bits, 1u);
}

std::string generate_until(uint32_t n, uint32_t d) {
    std::ostringstream os;
    os << "# until family: nested release of obligations per goal\n";
    os << "INPUTS:";
    for (uint32_t i = 1; i <= n; ++i) os << " x" << i;
    os << "\nOUTPUTS:";
    for (uint32_t i = 1; i <= n; ++i)
        for (uint32_t j = 1; j <= d; ++j) os << " y" << i << "_" << j;
    os << "\n";
    for (uint32_t i = 1; i <= n; ++i) {
        std::string nest = "y" + std::to_string(i) + "_" + std::to_string(d);
        for (uint32_t j = d - 1; j >= 1; --j) {
            nest = "y" + std::to_string(i) + "_" + std::to_string(j) + " U (" +
                   nest + ")";
            if (j == 1) break;
        }
        os << "GOAL g" << i << ": (!x" << i << ") U (" << nest << ")\n";
    }
    return os.str();
}

std::string generate_next(uint32_t n, uint32_t d) {
    std::ostringstream os;
    os << "# next family: input-triggered obligations d steps ahead\n";
    os << "INPUTS:";
    for (uint32_t i = 1; i <= n; ++i) os << " x" << i;
    os << "\nOUTPUTS:";
    for (uint32_t i = 1; i <= n; ++i) os << " y" << i;
    os << "\n";
    for (uint32_t i = 1; i <= n; ++i) {
        os << "GOAL g" << i << ": x" << i << " ->";
        for (uint32_t j = 0; j < d; ++j) os << " X";
        os << " y" << i << "\n";
    }
    return os.str();
}

std::string generate_chain(uint32_t n, uint32_t d) {
    const uint32_t chains = (n + 1) / 2;
    std::ostringstream os;
    os << "# chain family: staged progress goals with mutex goals interleaved\n";
    os << "INPUTS:\nOUTPUTS:";
    for (uint32_t k = 1; k <= chains; ++k)
        for (uint32_t j = 1; j <= d; ++j) os << " y" << k << "_" << j;
    os << "\n";
    auto last = [&](uint32_t k) {
        return "y" + std::to_string(k) + "_" + std::to_string(d);
    };
    uint32_t goal = 1;
    for (uint32_t k = 1; k <= chains && goal <= n; ++k) {
        std::string nest = "F " + last(k);
        for (uint32_t j = d - 1; j >= 1; --j) {
            nest = "F (y" + std::to_string(k) + "_" + std::to_string(j) +
                   " & X " + nest + ")";
            if (j == 1) break;
        }
        os << "GOAL g" << goal++ << ": " << nest << "\n";
        if (goal > n) break;
        uint32_t other = k < chains ? k + 1 : 1;
        if (other == k)
            os << "GOAL g" << goal++ << ": G !" << last(k) << "\n";
        else
            os << "GOAL g" << goal++ << ": G !(" << last(k) << " & "
               << last(other) << ")\n";
    }
    return os.str();
}

std::string bit_equals(const std::string& prefix, uint32_t bits, uint32_t value) {
    std::string out;
    for (uint32_t j = 0; j < bits; ++j) {
        if (j) out += " & ";
        if (!((value >> j) & 1u)) out += "!";
        out += prefix + std::to_string(j);
    }
    return out;
}

std::string generate_counter(uint32_t n, uint32_t d, uint64_t seed) {
    const uint32_t bits = d;
    if (n >= 2 && n - 1 > (1u << bits))
        throw std::invalid_argument("counter family needs 2^d >= n-1 targets");
    std::ostringstream os;
    os << "# counter family: environment-commanded updates vs reach targets\n";
    os << "INPUTS: inc\nOUTPUTS:";
    for (uint32_t j = 0; j < bits; ++j) os << " b" << j;
    os << "\n";

    // Policy goal: on inc the counter increments, otherwise it holds.
    std::string upd1, upd0;
    for (uint32_t j = 0; j < bits; ++j) {
        if (j) {
            upd1 += " & ";
            upd0 += " & ";
        }
        std::string carry;
        for (uint32_t l = 0; l < j; ++l) {
            if (l) carry += " & ";
            carry += "b" + std::to_string(l);
        }
        std::string bj = "b" + std::to_string(j);
        if (j == 0)
            upd1 += "(X b0 <-> !b0)";
        else
            upd1 += "(X " + bj + " <-> !(" + bj + " <-> (" + carry + ")))";
        upd0 += "(X " + bj + " <-> " + bj + ")";
    }
    os << "GOAL g1: G ((X true) -> ((inc -> (" << upd1 << ")) & (!inc -> ("
       << upd0 << "))))\n";

    std::mt19937_64 rng(seed);
    std::vector<uint32_t> targets;
    while (targets.size() + 1 < n) {
        uint32_t v = static_cast<uint32_t>(rng()) & ((1u << bits) - 1);
        if (std::find(targets.begin(), targets.end(), v) == targets.end())
            targets.push_back(v);
    }
    for (uint32_t i = 0; i < targets.size(); ++i)
        os << "GOAL g" << (i + 2) << ": F (" << bit_equals("b", bits, targets[i])
           << ")\n";
    return os.str();
}

std::string generate_robotnav(uint32_t n, uint32_t d, uint64_t seed) {
    const uint32_t w = std::max(2u, d);
    const uint32_t cells = w * w;
    const uint32_t bits = bits_for_count(cells);
    const uint32_t boundary = (w - 1) / 2;  // left: col <= boundary

    std::ostringstream os;
    os << "# robotnav family: grid navigation with a one-way gated corridor\n";
    os << "INPUTS: door\nOUTPUTS:";
    for (uint32_t j = 0; j < bits; ++j) os << " p" << j;
    os << "\n";

    auto cell_cube = [&](uint32_t cell) { return bit_equals("p", bits, cell); };

    // Movement legality: stay or step to an orthogonal neighbour; crossing
    // the corridor left-to-right needs the door open, right-to-left never.
    std::string moves;
    bool first = true;
    auto add_move = [&](uint32_t from, uint32_t to, bool needs_door) {
        if (!first) moves += " | ";
        moves += "((" + cell_cube(from) + ") & X (" + cell_cube(to) + ")";
        if (needs_door) moves += " & door";
        moves += ")";
        first = false;
    };
    for (uint32_t r = 0; r < w; ++r) {
        for (uint32_t c = 0; c < w; ++c) {
            uint32_t cell = r * w + c;
            add_move(cell, cell, false);
            if (r > 0) add_move(cell, cell - w, false);
            if (r + 1 < w) add_move(cell, cell + w, false);
            if (c > 0 && c != boundary + 1) add_move(cell, cell - 1, false);
            if (c + 1 < w) add_move(cell, cell + 1, c == boundary);
        }
    }
    os << "GOAL g1: G ((X true) -> (" << moves << "))\n";

    std::mt19937_64 rng(seed);
    std::vector<uint32_t> left, right;
    for (uint32_t r = 0; r < w; ++r)
        for (uint32_t c = 0; c < w; ++c)
            (c <= boundary ? left : right).push_back(r * w + c);
    uint32_t want_left = n >= 2 ? (n - 1 + 1) / 2 : 0;
    uint32_t want_right = n >= 2 ? (n - 1) / 2 : 0;
    if (want_left > left.size() || want_right > right.size())
        throw std::invalid_argument("robotnav family: grid too small for n-1 regions");
    auto pick = [&](std::vector<uint32_t>& pool, uint32_t count) {
        std::vector<uint32_t> chosen;
        while (chosen.size() < count) {
            uint32_t cell = pool[static_cast<size_t>(rng() % pool.size())];
            if (std::find(chosen.begin(), chosen.end(), cell) == chosen.end())
                chosen.push_back(cell);
        }
        return chosen;
    };
    std::vector<uint32_t> left_regions = pick(left, want_left);
    std::vector<uint32_t> right_regions = pick(right, want_right);
    uint32_t goal = 2;
    for (uint32_t i = 0; i < std::max(want_left, want_right); ++i) {
        if (i < left_regions.size())
            os << "GOAL g" << goal++ << ": F (" << cell_cube(left_regions[i])
               << ")\n";
        if (i < right_regions.size())
            os << "GOAL g" << goal++ << ": F (" << cell_cube(right_regions[i])
               << ")\n";
    }
    return os.str();
}

}  // namespace

std::string generate(const FamilyParams& params) {
    if (params.n < 1 || params.d < 1)
        throw std::invalid_argument("family parameters must be >= 1");
    switch (params.family) {
        case Family::kChain: return generate_chain(params.n, params.d);
        case Family::kUntil: return generate_until(params.n, params.d);
        case Family::kNext: return generate_next(params.n, params.d);
        case Family::kCounter: return generate_counter(params.n, params.d, params.seed);
        case Family::kRobotnav:
            return generate_robotnav(params.n, params.d, params.seed);
    }
    throw std::invalid_argument("unknown family");
}

ComparisonReport run_comparison(const Spec& spec, const std::string& family,
                                uint32_t n, uint32_t d,
                                const CompareOpts& opts) {
    using clock = std::chrono::steady_clock;
    ComparisonReport report;
    report.family = family;
    report.n = n;
    report.d = d;
    report.with_enum = opts.with_enum;

    std::optional<clock::time_point> deadline;
    if (opts.timeout_seconds > 0)
        deadline = clock::now() + std::chrono::duration_cast<clock::duration>(
                                      std::chrono::duration<double>(
                                          opts.timeout_seconds));
    const size_t ceiling =
        opts.node_ceiling ? opts.node_ceiling : BddEngine::kDefaultNodeCeiling;

    std::vector<Dfa> dfas = build_goal_dfas(spec);

    // Arena size: exact reachable count when the explicit product is
    // feasible, the full product bound otherwise.
    uint64_t bound = 1;
    for (const Dfa& dfa : dfas) {
        if (bound > UINT64_MAX / std::max(1u, dfa.num_states))
            bound = UINT64_MAX;
        else
            bound *= std::max(1u, dfa.num_states);
    }
    const uint32_t ap = spec.alphabet().size();
    if (ap <= 16 && bound <= kDefaultProductCap &&
        bound * (1ull << ap) <= (1ull << 28)) {
        ProductArena arena =
            build_product(lift_goal_dfas(spec, dfas),
                          {spec.input_mask(), spec.output_mask()});
        report.states = arena.num_states;
        report.states_exact = true;
    } else {
        report.states = bound;
        report.states_exact = false;
    }

    try {
        auto t0 = clock::now();
        BddEngine engine(ceiling);
        SymbolicArena arena = encode(dfas, spec.inputs, spec.outputs, engine);
        FixpointOpts fp;
        fp.deadline = deadline;
        WinningFormulas wf = symbolic_fixpoint(arena, fp);
        auto t1 = clock::now();
        report.mpsynth_fixpoint_ms =
            std::chrono::duration<double, std::milli>(t1 - t0).count();

        report.mpsynth_maximal =
            maximal_assignments(wf, arena, arena.initial_tuple);
        GoalSet best = maximum_assignment(wf, arena, arena.initial_tuple);
        if (best != 0) (void)symbolic_strategy(wf, arena, best);
        auto t2 = clock::now();
        report.mpsynth_extract_ms =
            std::chrono::duration<double, std::milli>(t2 - t1).count();
    } catch (const TimeoutError&) {
        report.timed_out = true;
        return report;
    }

    if (!opts.with_enum) return report;
    try {
        auto t0 = clock::now();
        EnumOpts eo;
        eo.node_ceiling = ceiling;
        eo.deadline = deadline;
        EnumReport er = enumerate_maximal(spec, dfas, eo);
        report.enum_maximal = er.maximal;
        // The baseline also extracts a strategy for one maximum set,
        // via its own single-property path.
        GoalSet best = 0;
        int best_count = -1;
        for (GoalSet c : er.maximal) {
            int count = __builtin_popcount(c);
            if (count > best_count) {
                best = c;
                best_count = count;
            }
        }
        if (best != 0) {
            std::vector<Dfa> components;
            for (uint32_t i = 0; i < spec.goals.size(); ++i)
                if ((best >> i) & 1u) components.push_back(dfas[i]);
            BddEngine engine(ceiling);
            SymbolicArena arena =
                encode(components, spec.inputs, spec.outputs, engine);
            FixpointOpts fp;
            fp.deadline = deadline;
            WinningFormulas wf = solve_conjunction(arena, fp);
            (void)conjunction_strategy(wf, arena);
        }
        report.enum_ms = std::chrono::duration<double, std::milli>(
                             clock::now() - t0)
                             .count();
        report.agree = !er.complete ? false
                                    : report.enum_maximal == report.mpsynth_maximal;
    } catch (const TimeoutError&) {
        report.timed_out = true;
    }
    return report;
}

std::string comparison_csv_header() {
    return "family,n,d,states,mpsynth_fixpoint_ms,mpsynth_extract_ms,enum_ms,"
           "agree\n";
}

std::string comparison_csv_row(const ComparisonReport& report) {
    std::ostringstream os;
    os << report.family << ',' << report.n << ',' << report.d << ','
       << report.states << ',' << report.mpsynth_fixpoint_ms << ','
       << report.mpsynth_extract_ms << ',';
    if (report.with_enum && !report.timed_out) os << report.enum_ms;
    os << ',';
    if (report.timed_out)
        os << "timeout";
    else if (report.with_enum)
        os << (report.agree ? "true" : "false");
    os << '\n';
    return os.str();
}

} // namespace mpsynth
