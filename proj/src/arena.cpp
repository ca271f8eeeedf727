#include "mpsynth/arena.hpp"

#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

#include "mpsynth/errors.hpp"

namespace mpsynth {

std::vector<Valuation> lex_valuations(Valuation mask) {
    std::vector<uint32_t> bits;
    for (uint32_t b = 0; b < 32; ++b)
        if ((mask >> b) & 1u) bits.push_back(b);
    uint32_t k = static_cast<uint32_t>(bits.size());
    std::vector<Valuation> out;
    out.reserve(1u << k);
    for (uint32_t v = 0; v < (1u << k); ++v) {
        Valuation combined = 0;
        for (uint32_t j = 0; j < k; ++j)
            if ((v >> (k - 1 - j)) & 1u) combined |= 1u << bits[j];
        out.push_back(combined);
    }
    return out;
}

namespace {

struct TupleHash {
    size_t operator()(const std::vector<uint32_t>& t) const {
        size_t h = 0x9e3779b97f4a7c15ull;
        for (uint32_t v : t) h = (h ^ v) * 0x100000001b3ull;
        return h;
    }
};

}  // namespace

ProductArena build_product(const std::vector<Dfa>& dfas, IoSplit split,
                           uint32_t state_cap) {
    if (dfas.empty() || dfas.size() > kMaxGoals)
        throw std::invalid_argument("product needs between 1 and 30 components");
    const Alphabet& alphabet = dfas[0].alphabet;
    for (const Dfa& d : dfas)
        if (!(d.alphabet == alphabet))
            throw std::invalid_argument("product components must share one alphabet");

    ProductArena arena;
    arena.alphabet = alphabet;
    arena.split = split;
    arena.num_goals = static_cast<uint32_t>(dfas.size());
    for (const Dfa& d : dfas) arena.component_sizes.push_back(d.num_states);

    const uint32_t num_syms = alphabet.num_symbols();
    const uint32_t n = arena.num_goals;

    std::unordered_map<std::vector<uint32_t>, uint32_t, TupleHash> index;
    std::deque<uint32_t> queue;

    auto intern = [&](const std::vector<uint32_t>& tuple) {
        auto [it, inserted] =
            index.try_emplace(tuple, static_cast<uint32_t>(arena.tuples.size()));
        if (inserted) {
            arena.tuples.push_back(tuple);
            GoalSet s = 0;
            for (uint32_t i = 0; i < n; ++i)
                if (dfas[i].is_final(tuple[i])) s |= 1u << i;
            arena.sat.push_back(s);
            queue.push_back(it->second);
            if (arena.tuples.size() > state_cap)
                throw ResourceError("product state cap exceeded (cap " +
                                    std::to_string(state_cap) + ")");
            if (arena.tuples.size() * static_cast<size_t>(num_syms) >
                (1ull << 28))
                throw ResourceError(
                    "product transition table too large for the explicit "
                    "pipeline");
        }
        return it->second;
    };

    std::vector<uint32_t> init;
    for (const Dfa& d : dfas) init.push_back(d.initial);
    intern(init);

    std::vector<uint32_t> next(n);
    while (!queue.empty()) {
        uint32_t s = queue.front();
        queue.pop_front();
        if (arena.delta.size() < static_cast<size_t>(s + 1) * num_syms)
            arena.delta.resize(static_cast<size_t>(s + 1) * num_syms);
        std::vector<uint32_t> tuple = arena.tuples[s];
        for (Valuation sym = 0; sym < num_syms; ++sym) {
            for (uint32_t i = 0; i < n; ++i) next[i] = dfas[i].step(tuple[i], sym);
            arena.delta[static_cast<size_t>(s) * num_syms + sym] = intern(next);
        }
    }

    arena.num_states = static_cast<uint32_t>(arena.tuples.size());
    arena.initial = 0;
    return arena;
}

std::string goal_set_to_string(GoalSet set,
                               const std::vector<std::string>& goal_labels) {
    std::string out = "{";
    bool first = true;
    for (uint32_t i = 0; i < goal_labels.size(); ++i) {
        if (!(set >> i & 1u)) continue;
        if (!first) out += ",";
        out += goal_labels[i];
        first = false;
    }
    return out + "}";
}

std::string arena_to_dot(const ProductArena& arena,
                         const std::vector<std::string>& goal_labels) {
    std::ostringstream os;
    os << "digraph arena {\n  rankdir=LR;\n  node [shape=circle];\n";
    os << "  init [shape=point];\n  init -> s" << arena.initial << ";\n";
    for (uint32_t s = 0; s < arena.num_states; ++s) {
        os << "  s" << s << " [label=\"s" << s << "\\n"
           << goal_set_to_string(arena.sat_goals(s), goal_labels) << "\"];\n";
    }
    for (uint32_t s = 0; s < arena.num_states; ++s) {
        std::map<uint32_t, uint32_t> edge_count;
        for (Valuation sym = 0; sym < arena.num_symbols(); ++sym)
            ++edge_count[arena.step(s, sym)];
        for (const auto& [t, count] : edge_count)
            os << "  s" << s << " -> s" << t << " [label=\"" << count
               << " syms\"];\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace mpsynth
