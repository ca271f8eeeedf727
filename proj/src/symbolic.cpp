#include "mpsynth/symbolic.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <unordered_map>

#include "mpsynth/errors.hpp"

namespace mpsynth {

namespace {

uint32_t bits_for(uint32_t count) {
    uint32_t bits = 0;
    while ((1u << bits) < count) ++bits;
    return bits;  // ceil(log2(count)), 0 for a single state
}

}  // namespace

std::vector<uint32_t> SymbolicArena::flat_state_vars() const {
    std::vector<uint32_t> out;
    for (const auto& block : state_vars)
        out.insert(out.end(), block.begin(), block.end());
    return out;
}

std::vector<std::pair<uint32_t, BoolFn>> SymbolicArena::transition_bindings()
    const {
    std::vector<std::pair<uint32_t, BoolFn>> out;
    for (uint32_t i = 0; i < num_goals; ++i)
        for (size_t b = 0; b < state_vars[i].size(); ++b)
            out.emplace_back(state_vars[i][b], transition[i][b]);
    return out;
}

std::vector<int8_t> SymbolicArena::state_assignment(
    const std::vector<uint32_t>& tuple, GoalSet set) const {
    std::vector<int8_t> assign(engine->num_vars(), -1);
    for (uint32_t i = 0; i < num_goals; ++i)
        for (size_t b = 0; b < state_vars[i].size(); ++b)
            assign[state_vars[i][b]] = (tuple[i] >> b) & 1u;
    for (uint32_t i = 0; i < num_goals; ++i)
        assign[goal_vars[i]] = (set >> i) & 1u;
    return assign;
}

std::vector<std::pair<uint32_t, BoolFn>> SymbolicArena::state_bindings(
    const std::vector<uint32_t>& tuple) const {
    std::vector<std::pair<uint32_t, BoolFn>> out;
    for (uint32_t i = 0; i < num_goals; ++i)
        for (size_t b = 0; b < state_vars[i].size(); ++b)
            out.emplace_back(state_vars[i][b],
                             engine->constant(((tuple[i] >> b) & 1u) != 0));
    return out;
}

std::vector<std::pair<uint32_t, BoolFn>> SymbolicArena::goal_bindings(
    GoalSet set) const {
    std::vector<std::pair<uint32_t, BoolFn>> out;
    for (uint32_t i = 0; i < num_goals; ++i)
        out.emplace_back(goal_vars[i], engine->constant(((set >> i) & 1u) != 0));
    return out;
}

std::vector<uint32_t> SymbolicArena::step_tuple(
    const std::vector<uint32_t>& tuple, Valuation packed_output,
    Valuation packed_input) const {
    std::vector<int8_t> assign(engine->num_vars(), -1);
    for (uint32_t i = 0; i < num_goals; ++i)
        for (size_t b = 0; b < state_vars[i].size(); ++b)
            assign[state_vars[i][b]] = (tuple[i] >> b) & 1u;
    for (size_t j = 0; j < output_vars.size(); ++j)
        assign[output_vars[j]] = (packed_output >> j) & 1u;
    for (size_t j = 0; j < input_vars.size(); ++j)
        assign[input_vars[j]] = (packed_input >> j) & 1u;
    std::vector<uint32_t> next(num_goals, 0);
    for (uint32_t i = 0; i < num_goals; ++i)
        for (size_t b = 0; b < state_vars[i].size(); ++b)
            if (engine->evaluate(transition[i][b], assign))
                next[i] |= 1u << b;
    return next;
}

uint64_t SymbolicArena::full_product_bound() const {
    uint64_t bound = 1;
    for (uint32_t size : component_sizes) {
        if (bound > UINT64_MAX / std::max(1u, size)) return UINT64_MAX;
        bound *= std::max(1u, size);
    }
    return bound;
}

SymbolicArena encode(const std::vector<Dfa>& dfas,
                     const std::vector<std::string>& inputs,
                     const std::vector<std::string>& outputs, BddEngine& engine,
                     VarOrderPreset order) {
    if (dfas.empty() || dfas.size() > kMaxGoals)
        throw std::invalid_argument("encode needs between 1 and 30 components");
    if (engine.num_vars() != 0)
        throw std::invalid_argument("encode requires a fresh engine");

    SymbolicArena arena;
    arena.engine = &engine;
    arena.num_goals = static_cast<uint32_t>(dfas.size());
    arena.state_vars.resize(arena.num_goals);

    std::vector<uint32_t> bit_counts;
    for (const Dfa& d : dfas) {
        arena.component_sizes.push_back(d.num_states);
        arena.initial_tuple.push_back(d.initial);
        bit_counts.push_back(bits_for(d.num_states));
    }

    // State blocks first (the quantified X/Y variables go to the bottom of
    // the order where quantification stays local).
    if (order == VarOrderPreset::kDefault) {
        for (uint32_t i = 0; i < arena.num_goals; ++i)
            for (uint32_t b = 0; b < bit_counts[i]; ++b)
                arena.state_vars[i].push_back(engine.new_var(
                    "z" + std::to_string(i) + "_" + std::to_string(b)));
    } else {
        uint32_t max_bits = 0;
        for (uint32_t c : bit_counts) max_bits = std::max(max_bits, c);
        for (uint32_t b = 0; b < max_bits; ++b)
            for (uint32_t i = 0; i < arena.num_goals; ++i)
                if (b < bit_counts[i])
                    arena.state_vars[i].push_back(engine.new_var(
                        "z" + std::to_string(i) + "_" + std::to_string(b)));
    }
    for (uint32_t i = 0; i < arena.num_goals; ++i)
        arena.goal_vars.push_back(engine.new_var("k" + std::to_string(i)));
    for (const std::string& name : outputs)
        arena.output_vars.push_back(engine.new_var(name));
    for (const std::string& name : inputs)
        arena.input_vars.push_back(engine.new_var(name));

    auto atom_var = [&](const std::string& atom) -> uint32_t {
        for (size_t j = 0; j < outputs.size(); ++j)
            if (outputs[j] == atom) return arena.output_vars[j];
        for (size_t j = 0; j < inputs.size(); ++j)
            if (inputs[j] == atom) return arena.input_vars[j];
        throw std::invalid_argument("DFA atom '" + atom +
                                    "' is not a declared input or output");
    };

    for (uint32_t i = 0; i < arena.num_goals; ++i) {
        const Dfa& d = dfas[i];
        std::vector<uint32_t> sym_vars;
        for (const std::string& atom : d.alphabet.atoms)
            sym_vars.push_back(atom_var(atom));

        std::vector<BoolFn> eta(bit_counts[i], engine.constant(false));
        BoolFn accept = engine.constant(false);
        for (uint32_t s = 0; s < d.num_states; ++s) {
            std::vector<std::pair<uint32_t, bool>> state_lits;
            for (uint32_t b = 0; b < bit_counts[i]; ++b)
                state_lits.emplace_back(arena.state_vars[i][b],
                                        ((s >> b) & 1u) != 0);
            BoolFn state_cube = engine.cube(state_lits);
            if (d.is_final(s)) accept = engine.apply_or(accept, state_cube);
            for (Valuation sym = 0; sym < d.num_symbols(); ++sym) {
                uint32_t next = d.step(s, sym);
                if (next == 0) continue;  // all-zero encoding contributes nothing
                std::vector<std::pair<uint32_t, bool>> lits = state_lits;
                for (size_t j = 0; j < sym_vars.size(); ++j)
                    lits.emplace_back(sym_vars[j], ((sym >> j) & 1u) != 0);
                BoolFn cube = engine.cube(lits);
                for (uint32_t b = 0; b < bit_counts[i]; ++b)
                    if ((next >> b) & 1u) eta[b] = engine.apply_or(eta[b], cube);
            }
        }
        arena.transition.push_back(std::move(eta));
        arena.acceptance.push_back(accept);
    }
    return arena;
}

BoolFn initial_winning(const SymbolicArena& arena) {
    BddEngine& engine = *arena.engine;
    BoolFn w0 = engine.constant(true);
    for (uint32_t i = 0; i < arena.num_goals; ++i) {
        BoolFn k = engine.var(arena.goal_vars[i]);
        BoolFn clause = engine.apply_or(engine.negate(k), arena.acceptance[i]);
        w0 = engine.apply_and(w0, clause);
    }
    return w0;
}

namespace {

WinningFormulas run_fixpoint(const SymbolicArena& arena, BoolFn w0,
                             const FixpointOpts& opts) {
    BddEngine& engine = *arena.engine;
    auto bindings = arena.transition_bindings();

    WinningFormulas wf;
    wf.w0 = w0;
    wf.t = w0;
    wf.w = w0;
    wf.iterations = 0;

    while (true) {
        if (opts.deadline &&
            std::chrono::steady_clock::now() > *opts.deadline)
            throw TimeoutError("symbolic fixed point timed out at iteration " +
                               std::to_string(wf.iterations));
        BoolFn stepped = engine.compose(wf.w, bindings);
        BoolFn forced = engine.forall(arena.input_vars, stepped);
        BoolFn fresh = engine.apply_and(engine.negate(wf.w), forced);
        wf.t = engine.apply_or(wf.t, fresh);
        BoolFn w_next = engine.exists(arena.output_vars, wf.t);
        ++wf.iterations;
        wf.live_nodes_per_iter.push_back(engine.live_nodes());
        if (w_next == wf.w) break;
        wf.w = w_next;
    }
    return wf;
}

}  // namespace

WinningFormulas symbolic_fixpoint(const SymbolicArena& arena,
                                  const FixpointOpts& opts) {
    return run_fixpoint(arena, initial_winning(arena), opts);
}

WinningFormulas solve_conjunction(const SymbolicArena& arena,
                                  const FixpointOpts& opts) {
    BddEngine& engine = *arena.engine;
    BoolFn w0 = engine.constant(true);
    for (uint32_t i = 0; i < arena.num_goals; ++i)
        w0 = engine.apply_and(w0, arena.acceptance[i]);
    return run_fixpoint(arena, w0, opts);
}

bool query_realizable(const WinningFormulas& wf, const SymbolicArena& arena,
                      const std::vector<uint32_t>& tuple, GoalSet set) {
    return arena.engine->evaluate(wf.w, arena.state_assignment(tuple, set));
}

bool query_realizable_initial(const WinningFormulas& wf,
                              const SymbolicArena& arena, GoalSet set) {
    return query_realizable(wf, arena, arena.initial_tuple, set);
}

std::vector<GoalSet> maximal_assignments(const WinningFormulas& wf,
                                         const SymbolicArena& arena,
                                         const std::vector<uint32_t>& tuple) {
    BddEngine& engine = *arena.engine;
    BoolFn g = engine.compose(wf.w, arena.state_bindings(tuple));

    std::vector<GoalSet> result;
    const uint32_t n = arena.num_goals;
    std::vector<int8_t> assign(engine.num_vars(), -1);
    auto eval_set = [&](GoalSet set) {
        for (uint32_t i = 0; i < n; ++i) assign[arena.goal_vars[i]] = (set >> i) & 1u;
        return engine.evaluate(g, assign);
    };

    while (true) {
        auto picked = engine.pick_assignment(g, arena.goal_vars);
        if (!picked) break;
        GoalSet m = 0;
        for (uint32_t i = 0; i < n; ++i)
            if ((*picked)[i]) m |= 1u << i;
        // Greedy completion to a maximal set, ascending index.
        for (uint32_t i = 0; i < n; ++i) {
            if ((m >> i) & 1u) continue;
            if (eval_set(m | (1u << i))) m |= 1u << i;
        }
        result.push_back(m);
        // Block m and with it every subset of m.
        BoolFn clause = engine.constant(false);
        for (uint32_t i = 0; i < n; ++i)
            if (!((m >> i) & 1u))
                clause = engine.apply_or(clause, engine.var(arena.goal_vars[i]));
        g = engine.apply_and(g, clause);
    }
    std::sort(result.begin(), result.end(), goal_set_lex_less);
    return result;
}

GoalSet maximum_assignment(const WinningFormulas& wf,
                           const SymbolicArena& arena,
                           const std::vector<uint32_t>& tuple) {
    std::vector<GoalSet> all = maximal_assignments(wf, arena, tuple);
    GoalSet best = 0;
    int best_count = -1;
    for (GoalSet c : all) {
        int count = __builtin_popcount(c);
        if (count > best_count) {
            best = c;
            best_count = count;
        }
    }
    return best;
}

namespace {

struct TupleHash {
    size_t operator()(const std::vector<uint32_t>& t) const {
        size_t h = 0x9e3779b97f4a7c15ull;
        for (uint32_t v : t) h = (h ^ v) * 0x100000001b3ull;
        return h;
    }
};

Transducer extract(const SymbolicArena& arena, BoolFn moves, BoolFn done,
                   const std::vector<std::string>& input_names,
                   const std::vector<std::string>& output_names) {
    BddEngine& engine = *arena.engine;
    Transducer t;
    t.inputs = input_names;
    t.outputs = output_names;

    const uint32_t num_inputs = static_cast<uint32_t>(arena.input_vars.size());
    std::unordered_map<std::vector<uint32_t>, uint32_t, TupleHash> index;
    std::vector<std::vector<uint32_t>> order;
    auto intern = [&](const std::vector<uint32_t>& tuple) {
        auto [it, inserted] =
            index.try_emplace(tuple, static_cast<uint32_t>(order.size()));
        if (inserted) order.push_back(tuple);
        return it->second;
    };
    t.initial = intern(arena.initial_tuple);

    for (size_t qi = 0; qi < order.size(); ++qi) {
        std::vector<uint32_t> tuple = order[qi];
        Transducer::State st;
        std::vector<int8_t> assign(engine.num_vars(), -1);
        for (uint32_t i = 0; i < arena.num_goals; ++i)
            for (size_t b = 0; b < arena.state_vars[i].size(); ++b)
                assign[arena.state_vars[i][b]] = (tuple[i] >> b) & 1u;
        if (engine.evaluate(done, assign)) {
            t.states.push_back(std::move(st));
            continue;
        }
        BoolFn here = engine.compose(moves, arena.state_bindings(tuple));
        auto picked = engine.pick_assignment(here, arena.output_vars);
        if (!picked)
            throw std::logic_error("winning state without a winning move");
        Valuation out = 0;
        for (size_t j = 0; j < arena.output_vars.size(); ++j)
            if ((*picked)[j]) out |= 1u << j;
        st.output = out;
        st.next.resize(1u << num_inputs);
        for (Valuation x = 0; x < (1u << num_inputs); ++x)
            st.next[x] = intern(arena.step_tuple(tuple, out, x));
        t.states.push_back(std::move(st));
    }
    return t;
}

}  // namespace

Transducer symbolic_strategy(const WinningFormulas& wf,
                             const SymbolicArena& arena, GoalSet set) {
    if (!query_realizable_initial(wf, arena, set))
        throw UnrealizableError("goal set not realizable from the initial state");
    BddEngine& engine = *arena.engine;
    auto kb = arena.goal_bindings(set);
    BoolFn moves = engine.compose(wf.t, kb);
    BoolFn done = engine.compose(wf.w0, kb);
    std::vector<std::string> input_names, output_names;
    for (uint32_t v : arena.input_vars) input_names.push_back(engine.var_name(v));
    for (uint32_t v : arena.output_vars) output_names.push_back(engine.var_name(v));
    return extract(arena, moves, done, input_names, output_names);
}

Transducer conjunction_strategy(const WinningFormulas& wf,
                                const SymbolicArena& arena) {
    BddEngine& engine = *arena.engine;
    std::vector<int8_t> assign(engine.num_vars(), -1);
    for (uint32_t i = 0; i < arena.num_goals; ++i)
        for (size_t b = 0; b < arena.state_vars[i].size(); ++b)
            assign[arena.state_vars[i][b]] = (arena.initial_tuple[i] >> b) & 1u;
    if (!engine.evaluate(wf.w, assign))
        throw UnrealizableError("conjunction not realizable from the initial state");
    std::vector<std::string> input_names, output_names;
    for (uint32_t v : arena.input_vars) input_names.push_back(engine.var_name(v));
    for (uint32_t v : arena.output_vars) output_names.push_back(engine.var_name(v));
    return extract(arena, wf.t, wf.w0, input_names, output_names);
}

} // namespace mpsynth
