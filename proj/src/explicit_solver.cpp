#include "mpsynth/explicit_solver.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "mpsynth/errors.hpp"

namespace mpsynth {

PairRel::PairRel(uint32_t num_states, uint32_t num_goals)
    : num_states_(num_states), num_goals_(num_goals) {
    size_t bits = static_cast<size_t>(num_states) << num_goals;
    bits_.assign((bits + 63) / 64, 0);
}

bool PairRel::test(uint32_t state, GoalSet set) const {
    size_t bit = word_index(state, set);
    return (bits_[bit >> 6] >> (bit & 63)) & 1u;
}

void PairRel::set(uint32_t state, GoalSet set) {
    size_t bit = word_index(state, set);
    bits_[bit >> 6] |= 1ull << (bit & 63);
}

size_t PairRel::count() const {
    size_t total = 0;
    for (uint64_t w : bits_) total += __builtin_popcountll(w);
    return total;
}

bool PairRel::subset_of(const PairRel& other) const {
    for (size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] & ~other.bits_[i]) return false;
    return true;
}

PairRel PairRel::union_with(const PairRel& other) const {
    PairRel out = *this;
    for (size_t i = 0; i < bits_.size(); ++i) out.bits_[i] |= other.bits_[i];
    return out;
}

bool goal_set_lex_less(GoalSet a, GoalSet b) {
    while (a && b) {
        uint32_t ia = __builtin_ctz(a);
        uint32_t ib = __builtin_ctz(b);
        if (ia != ib) return ia < ib;
        a &= a - 1;
        b &= b - 1;
    }
    return a == 0 && b != 0;
}

std::vector<char> pre_c(const Dfa& game, IoSplit split,
                        const std::vector<char>& target) {
    std::vector<Valuation> ys = lex_valuations(split.output_mask);
    std::vector<Valuation> xs = lex_valuations(split.input_mask);
    std::vector<char> out(game.num_states, 0);
    for (uint32_t s = 0; s < game.num_states; ++s) {
        for (Valuation y : ys) {
            bool forced = true;
            for (Valuation x : xs) {
                if (!target[game.step(s, y | x)]) {
                    forced = false;
                    break;
                }
            }
            if (forced) {
                out[s] = 1;
                break;
            }
        }
    }
    return out;
}

SingleSolve solve_single(const Dfa& game, IoSplit split) {
    SingleSolve result;
    result.winning.assign(game.num_states, 0);
    result.rank.assign(game.num_states, UINT32_MAX);
    result.move.assign(game.num_states, std::nullopt);

    std::vector<Valuation> ys = lex_valuations(split.output_mask);
    std::vector<Valuation> xs = lex_valuations(split.input_mask);

    std::vector<uint32_t> frontier;
    for (uint32_t s = 0; s < game.num_states; ++s) {
        if (game.is_final(s)) {
            result.winning[s] = 1;
            result.rank[s] = 0;
            frontier.push_back(s);
        }
    }

    uint32_t layer = 0;
    while (!frontier.empty()) {
        ++layer;
        std::vector<uint32_t> next;
        // Batched sweep: cheap at reference scale and obviously the paper
        // iteration.
        for (uint32_t s = 0; s < game.num_states; ++s) {
            if (result.winning[s]) continue;
            for (Valuation y : ys) {
                bool forced = true;
                for (Valuation x : xs) {
                    uint32_t t = game.step(s, y | x);
                    if (!result.winning[t] || result.rank[t] >= layer) {
                        forced = false;
                        break;
                    }
                }
                if (forced) {
                    result.winning[s] = 1;
                    result.rank[s] = layer;
                    next.push_back(s);
                    break;
                }
            }
        }
        if (next.empty()) break;
        frontier = std::move(next);
    }
    result.iterations = layer;

    for (uint32_t s = 0; s < game.num_states; ++s) {
        if (!result.winning[s] || result.rank[s] == 0) continue;
        for (Valuation y : ys) {
            bool forced = true;
            for (Valuation x : xs) {
                uint32_t t = game.step(s, y | x);
                if (!result.winning[t] || result.rank[t] >= result.rank[s]) {
                    forced = false;
                    break;
                }
            }
            if (forced) {
                result.move[s] = y;
                break;
            }
        }
    }
    result.realizable = result.winning[game.initial] != 0;
    return result;
}

PairRel pre_mc(const ProductArena& arena, const PairRel& rel) {
    const uint32_t nC = 1u << arena.num_goals;
    std::vector<Valuation> ys = lex_valuations(arena.split.output_mask);
    std::vector<Valuation> xs = lex_valuations(arena.split.input_mask);
    PairRel out(arena.num_states, arena.num_goals);
    for (uint32_t s = 0; s < arena.num_states; ++s) {
        for (GoalSet c = 0; c < nC; ++c) {
            bool won = false;
            for (Valuation y : ys) {
                bool forced = true;
                for (Valuation x : xs) {
                    if (!rel.test(arena.step(s, y | x), c)) {
                        forced = false;
                        break;
                    }
                }
                if (forced) {
                    won = true;
                    break;
                }
            }
            if (won) out.set(s, c);
        }
    }
    return out;
}

WinRelation win_m(const ProductArena& arena, uint32_t goal_cap) {
    const uint32_t n = arena.num_goals;
    if (n > goal_cap)
        throw ResourceError("explicit solver limited to " +
                            std::to_string(goal_cap) + " goals, got " +
                            std::to_string(n));
    const uint32_t nC = 1u << n;
    const uint32_t num_outputs = arena.split.num_outputs();
    const uint32_t num_inputs = arena.split.num_inputs();
    const uint32_t numY = 1u << num_outputs;
    const uint32_t numX = 1u << num_inputs;
    const size_t counter_cells =
        static_cast<size_t>(arena.num_states) * nC * numY;
    if (counter_cells > (1ull << 28))
        throw ResourceError("explicit relation budget exceeded");

    WinRelation w;
    w.rel = PairRel(arena.num_states, n);
    w.rank.assign(static_cast<size_t>(arena.num_states) * nC, UINT32_MAX);

    // Compress a symbol's output part into a counter slot index.
    std::vector<uint32_t> y_slot(arena.num_symbols());
    for (Valuation sym = 0; sym < arena.num_symbols(); ++sym) {
        uint32_t slot = 0, j = 0;
        for (uint32_t b = 0; b < arena.alphabet.size(); ++b) {
            if (!((arena.split.output_mask >> b) & 1u)) continue;
            slot |= ((sym >> b) & 1u) << j;
            ++j;
        }
        y_slot[sym] = slot;
    }

    // Reverse edges, flat.
    const uint32_t num_syms = arena.num_symbols();
    std::vector<uint32_t> rev_off(arena.num_states + 1, 0);
    std::vector<std::pair<uint32_t, uint32_t>> rev_flat(
        static_cast<size_t>(arena.num_states) * num_syms);
    for (uint32_t s = 0; s < arena.num_states; ++s)
        for (Valuation sym = 0; sym < num_syms; ++sym)
            ++rev_off[arena.step(s, sym) + 1];
    for (uint32_t t = 0; t < arena.num_states; ++t) rev_off[t + 1] += rev_off[t];
    {
        std::vector<uint32_t> fill(arena.num_states, 0);
        for (uint32_t s = 0; s < arena.num_states; ++s) {
            for (Valuation sym = 0; sym < num_syms; ++sym) {
                uint32_t t = arena.step(s, sym);
                rev_flat[rev_off[t] + fill[t]] = {s, sym};
                ++fill[t];
            }
        }
    }

    std::vector<uint32_t> counters(counter_cells, 0);
    std::deque<std::pair<uint32_t, GoalSet>> current, next;

    auto add = [&](uint32_t s, GoalSet c, uint32_t layer,
                   std::deque<std::pair<uint32_t, GoalSet>>& out) {
        size_t idx = static_cast<size_t>(s) * nC + c;
        if (w.rank[idx] != UINT32_MAX) return;
        w.rank[idx] = layer;
        w.rel.set(s, c);
        out.emplace_back(s, c);
    };

    for (uint32_t s = 0; s < arena.num_states; ++s) {
        GoalSet sat = arena.sat_goals(s);
        GoalSet c = sat;
        while (true) {
            add(s, c, 0, current);
            if (c == 0) break;
            c = (c - 1) & sat;
        }
    }

    uint32_t layer = 0;
    while (!current.empty()) {
        ++layer;
        while (!current.empty()) {
            auto [t, c] = current.front();
            current.pop_front();
            for (uint32_t k = rev_off[t]; k < rev_off[t + 1]; ++k) {
                auto [s, sym] = rev_flat[k];
                size_t slot =
                    (static_cast<size_t>(s) * nC + c) * numY + y_slot[sym];
                if (++counters[slot] == numX) add(s, c, layer, next);
            }
        }
        std::swap(current, next);
    }
    w.iterations = layer;
    return w;
}

MaxRelation max_op(const ProductArena& arena, const PairRel& rel) {
    const uint32_t nC = 1u << rel.num_goals();
    MaxRelation m;
    m.num_goals = rel.num_goals();
    m.sets.resize(arena.num_states);
    for (uint32_t s = 0; s < arena.num_states; ++s) {
        std::vector<GoalSet> present;
        for (GoalSet c = 0; c < nC; ++c)
            if (rel.test(s, c)) present.push_back(c);
        std::vector<GoalSet> maximal;
        for (GoalSet c : present) {
            bool dominated = false;
            for (GoalSet d : present) {
                if (d != c && (c & d) == c) {
                    dominated = true;
                    break;
                }
            }
            if (!dominated) maximal.push_back(c);
        }
        std::sort(maximal.begin(), maximal.end(), goal_set_lex_less);
        m.sets[s] = std::move(maximal);
    }
    return m;
}

namespace {

/// Per-state bitmap of goal sets covered by some antichain element.
std::vector<std::vector<uint64_t>> coverage(const ProductArena& arena,
                                            const MaxRelation& m) {
    const uint32_t nC = 1u << m.num_goals;
    std::vector<std::vector<uint64_t>> cov(
        arena.num_states, std::vector<uint64_t>((nC + 63) / 64, 0));
    for (uint32_t s = 0; s < arena.num_states; ++s) {
        for (GoalSet d : m.sets[s]) {
            GoalSet c = d;
            while (true) {
                cov[s][c >> 6] |= 1ull << (c & 63);
                if (c == 0) break;
                c = (c - 1) & d;
            }
        }
    }
    return cov;
}

}  // namespace

PairRel pre_mmc(const ProductArena& arena, const MaxRelation& m) {
    const uint32_t nC = 1u << m.num_goals;
    std::vector<Valuation> ys = lex_valuations(arena.split.output_mask);
    std::vector<Valuation> xs = lex_valuations(arena.split.input_mask);
    auto cov = coverage(arena, m);
    auto covered = [&](uint32_t s, GoalSet c) {
        return (cov[s][c >> 6] >> (c & 63)) & 1u;
    };
    PairRel out(arena.num_states, m.num_goals);
    for (uint32_t s = 0; s < arena.num_states; ++s) {
        for (GoalSet c = 0; c < nC; ++c) {
            bool won = false;
            for (Valuation y : ys) {
                bool forced = true;
                for (Valuation x : xs) {
                    if (!covered(arena.step(s, y | x), c)) {
                        forced = false;
                        break;
                    }
                }
                if (forced) {
                    won = true;
                    break;
                }
            }
            if (won) out.set(s, c);
        }
    }
    return out;
}

PairRel downward_close(const ProductArena& arena, const MaxRelation& m) {
    PairRel out(arena.num_states, m.num_goals);
    for (uint32_t s = 0; s < arena.num_states; ++s) {
        for (GoalSet d : m.sets[s]) {
            GoalSet c = d;
            while (true) {
                out.set(s, c);
                if (c == 0) break;
                c = (c - 1) & d;
            }
        }
    }
    return out;
}

namespace {

PairRel antichain_pairs(const ProductArena& arena, const MaxRelation& m) {
    PairRel out(arena.num_states, m.num_goals);
    for (uint32_t s = 0; s < arena.num_states; ++s)
        for (GoalSet c : m.sets[s]) out.set(s, c);
    return out;
}

}  // namespace

MaxRelation win_mm(const ProductArena& arena, uint32_t goal_cap) {
    const uint32_t n = arena.num_goals;
    if (n > goal_cap)
        throw ResourceError("explicit solver limited to " +
                            std::to_string(goal_cap) + " goals, got " +
                            std::to_string(n));
    PairRel base(arena.num_states, n);
    for (uint32_t s = 0; s < arena.num_states; ++s) {
        GoalSet sat = arena.sat_goals(s);
        GoalSet c = sat;
        while (true) {
            base.set(s, c);
            if (c == 0) break;
            c = (c - 1) & sat;
        }
    }
    MaxRelation cur = max_op(arena, base);
    uint64_t bound =
        static_cast<uint64_t>(arena.num_states) * (1ull << n);
    uint32_t iterations = 0;
    while (true) {
        PairRel grown = antichain_pairs(arena, cur).union_with(pre_mmc(arena, cur));
        MaxRelation next = max_op(arena, grown);
        ++iterations;
        if (next == cur) break;
        cur = std::move(next);
        if (iterations > bound)
            throw std::logic_error("win_mm exceeded its iteration bound");
    }
    cur.iterations = iterations;
    return cur;
}

Transducer extract_strategy(const ProductArena& arena, const WinRelation& w,
                            GoalSet C) {
    const uint32_t nC = 1u << arena.num_goals;
    auto rank_of = [&](uint32_t s) {
        return w.rank[static_cast<size_t>(s) * nC + C];
    };
    if (rank_of(arena.initial) == UINT32_MAX)
        throw UnrealizableError("goal set not realizable from the initial state");

    std::vector<Valuation> ys = lex_valuations(arena.split.output_mask);
    std::vector<Valuation> xs = lex_valuations(arena.split.input_mask);

    Transducer t;
    for (uint32_t b = 0; b < arena.alphabet.size(); ++b) {
        if ((arena.split.input_mask >> b) & 1u)
            t.inputs.push_back(arena.alphabet.atoms[b]);
        if ((arena.split.output_mask >> b) & 1u)
            t.outputs.push_back(arena.alphabet.atoms[b]);
    }

    std::vector<uint32_t> state_index(arena.num_states, UINT32_MAX);
    std::vector<uint32_t> order;
    auto intern = [&](uint32_t s) {
        if (state_index[s] == UINT32_MAX) {
            state_index[s] = static_cast<uint32_t>(order.size());
            order.push_back(s);
        }
        return state_index[s];
    };
    t.initial = intern(arena.initial);

    for (size_t i = 0; i < order.size(); ++i) {
        uint32_t s = order[i];
        uint32_t r = rank_of(s);
        Transducer::State st;
        if (r == 0) {
            // Target already satisfied here; stop the play.
            t.states.push_back(std::move(st));
            continue;
        }
        std::optional<Valuation> choice;
        for (Valuation y : ys) {
            bool forced = true;
            for (Valuation x : xs) {
                if (rank_of(arena.step(s, y | x)) >= r) {
                    forced = false;
                    break;
                }
            }
            if (forced) {
                choice = y;
                break;
            }
        }
        if (!choice.has_value())
            throw std::logic_error("winning state has no rank-decreasing move");
        // Store the output over output atoms only (compressed).
        uint32_t packed = 0, j = 0;
        for (uint32_t b = 0; b < arena.alphabet.size(); ++b) {
            if (!((arena.split.output_mask >> b) & 1u)) continue;
            packed |= ((*choice >> b) & 1u) << j;
            ++j;
        }
        st.output = packed;
        st.next.resize(xs.size());
        for (size_t xi = 0; xi < xs.size(); ++xi) {
            uint32_t succ = arena.step(s, *choice | xs[xi]);
            // Index successors by the packed input valuation.
            uint32_t xpacked = 0, k = 0;
            for (uint32_t b = 0; b < arena.alphabet.size(); ++b) {
                if (!((arena.split.input_mask >> b) & 1u)) continue;
                xpacked |= ((xs[xi] >> b) & 1u) << k;
                ++k;
            }
            st.next[xpacked] = intern(succ);
        }
        t.states.push_back(std::move(st));
    }
    return t;
}

namespace {

bool oracle_rec(const ProductArena& arena, GoalSet C, uint32_t s, uint32_t h,
                const std::vector<Valuation>& ys, const std::vector<Valuation>& xs,
                std::vector<int8_t>& memo, uint32_t horizon) {
    if ((arena.sat_goals(s) & C) == C) return true;
    if (h == 0) return false;
    size_t idx = static_cast<size_t>(s) * (horizon + 1) + h;
    if (memo[idx] >= 0) return memo[idx] != 0;
    bool won = false;
    for (Valuation y : ys) {
        bool forced = true;
        for (Valuation x : xs) {
            if (!oracle_rec(arena, C, arena.step(s, y | x), h - 1, ys, xs, memo,
                            horizon)) {
                forced = false;
                break;
            }
        }
        if (forced) {
            won = true;
            break;
        }
    }
    memo[idx] = won ? 1 : 0;
    return won;
}

}  // namespace

bool oracle_realizable(const ProductArena& arena, GoalSet C, uint32_t horizon,
                       uint32_t from_state) {
    std::vector<Valuation> ys = lex_valuations(arena.split.output_mask);
    std::vector<Valuation> xs = lex_valuations(arena.split.input_mask);
    std::vector<int8_t> memo(
        static_cast<size_t>(arena.num_states) * (horizon + 1), -1);
    return oracle_rec(arena, C, from_state, horizon, ys, xs, memo, horizon);
}

bool oracle_realizable(const ProductArena& arena, GoalSet C, uint32_t horizon) {
    return oracle_realizable(arena, C, horizon, arena.initial);
}

std::string win_relation_to_json(const ProductArena& arena,
                                 const WinRelation& w,
                                 const std::vector<std::string>& goal_labels) {
    const uint32_t nC = 1u << arena.num_goals;
    std::ostringstream os;
    os << "{\"states\":[";
    for (uint32_t s = 0; s < arena.num_states; ++s) {
        if (s) os << ",";
        std::vector<GoalSet> sets;
        for (GoalSet c = 0; c < nC; ++c)
            if (w.rel.test(s, c)) sets.push_back(c);
        std::sort(sets.begin(), sets.end(), goal_set_lex_less);
        os << "{\"state\":" << s << ",\"sets\":[";
        for (size_t i = 0; i < sets.size(); ++i) {
            if (i) os << ",";
            os << "{\"labels\":[";
            bool first = true;
            for (uint32_t g = 0; g < goal_labels.size(); ++g) {
                if (!((sets[i] >> g) & 1u)) continue;
                if (!first) os << ",";
                os << "\"" << goal_labels[g] << "\"";
                first = false;
            }
            os << "],\"rank\":" << w.get_rank(s, sets[i], arena.num_goals) << "}";
        }
        os << "]}";
    }
    os << "]}";
    return os.str();
}

std::string max_relation_to_json(const MaxRelation& m,
                                 const std::vector<std::string>& goal_labels) {
    std::ostringstream os;
    os << "{\"states\":[";
    for (uint32_t s = 0; s < m.sets.size(); ++s) {
        if (s) os << ",";
        os << "{\"state\":" << s << ",\"maximal\":[";
        for (size_t i = 0; i < m.sets[s].size(); ++i) {
            if (i) os << ",";
            os << "[";
            bool first = true;
            for (uint32_t g = 0; g < goal_labels.size(); ++g) {
                if (!((m.sets[s][i] >> g) & 1u)) continue;
                if (!first) os << ",";
                os << "\"" << goal_labels[g] << "\"";
                first = false;
            }
            os << "]";
        }
        os << "]}";
    }
    os << "]}";
    return os.str();
}

} // namespace mpsynth
