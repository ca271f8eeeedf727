#include "mpsynth/dfa.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

#include "mpsynth/errors.hpp"

namespace mpsynth {

bool eps_accept(const FormulaFactory& factory, Formula f) {
    switch (factory.op(f)) {
        case Op::True: return true;
        case Op::False: return false;
        case Op::Atom: return false;
        case Op::Not: return !eps_accept(factory, factory.lhs(f));
        case Op::And:
            return eps_accept(factory, factory.lhs(f)) &&
                   eps_accept(factory, factory.rhs(f));
        case Op::Or:
            return eps_accept(factory, factory.lhs(f)) ||
                   eps_accept(factory, factory.rhs(f));
        case Op::Next: return false;
        case Op::WeakNext: return true;
        case Op::Until: return eps_accept(factory, factory.rhs(f));
        default:
            throw std::invalid_argument(
                "eps_accept: non-core operator encountered");
    }
}

namespace {

/// Resolves factory atom ids to alphabet bit positions, -1 when absent.
std::vector<int> atom_bits(const FormulaFactory& factory, Formula f,
                           const Alphabet& alphabet) {
    std::set<std::string> names;
    factory.collect_atoms(f, names);
    std::vector<int> bits;
    auto walk = [&](Formula g, auto&& self) -> void {
        switch (factory.op(g)) {
            case Op::Atom: {
                uint32_t aid = factory.lhs(g).id;
                if (aid >= bits.size()) bits.resize(aid + 1, -1);
                auto idx = alphabet.index_of(factory.atom_name(g));
                if (!idx)
                    throw std::invalid_argument("formula atom '" +
                                                factory.atom_name(g) +
                                                "' not in DFA alphabet");
                bits[aid] = static_cast<int>(*idx);
                break;
            }
            case Op::True:
            case Op::False:
                break;
            case Op::Not:
            case Op::Next:
            case Op::WeakNext:
                self(factory.lhs(g), self);
                break;
            case Op::And:
            case Op::Or:
            case Op::Until:
                self(factory.lhs(g), self);
                self(factory.rhs(g), self);
                break;
            default:
                throw std::invalid_argument("non-core operator encountered");
        }
    };
    walk(f, walk);
    return bits;
}

Formula derive_impl(FormulaFactory& fac, Formula f, Valuation sym,
                    const std::vector<int>& bits) {
    switch (fac.op(f)) {
        case Op::True:
        case Op::False:
            return f;
        case Op::Atom: {
            int bit = bits[fac.lhs(f).id];
            bool held = bit >= 0 && ((sym >> bit) & 1u);
            return held ? fac.tru() : fac.fls();
        }
        case Op::Not:
            return fac.mk_not(derive_impl(fac, fac.lhs(f), sym, bits));
        case Op::And:
            return fac.mk_and(derive_impl(fac, fac.lhs(f), sym, bits),
                              derive_impl(fac, fac.rhs(f), sym, bits));
        case Op::Or:
            return fac.mk_or(derive_impl(fac, fac.lhs(f), sym, bits),
                             derive_impl(fac, fac.rhs(f), sym, bits));
        case Op::Next:
        case Op::WeakNext:
            return fac.lhs(f);
        case Op::Until: {
            // a U b unfolds to b or (a and X(a U b))
            Formula da = derive_impl(fac, fac.lhs(f), sym, bits);
            Formula db = derive_impl(fac, fac.rhs(f), sym, bits);
            return fac.mk_or(db, fac.mk_and(da, f));
        }
        default:
            throw std::invalid_argument("derive: non-core operator encountered");
    }
}

bool last_sat_impl(const FormulaFactory& fac, Formula f, Valuation sym,
                   const std::vector<int>& bits) {
    switch (fac.op(f)) {
        case Op::True: return true;
        case Op::False: return false;
        case Op::Atom: {
            int bit = bits[fac.lhs(f).id];
            return bit >= 0 && ((sym >> bit) & 1u);
        }
        case Op::Not: return !last_sat_impl(fac, fac.lhs(f), sym, bits);
        case Op::And:
            return last_sat_impl(fac, fac.lhs(f), sym, bits) &&
                   last_sat_impl(fac, fac.rhs(f), sym, bits);
        case Op::Or:
            return last_sat_impl(fac, fac.lhs(f), sym, bits) ||
                   last_sat_impl(fac, fac.rhs(f), sym, bits);
        case Op::Next: return false;
        case Op::WeakNext: return true;
        case Op::Until: return last_sat_impl(fac, fac.rhs(f), sym, bits);
        default:
            throw std::invalid_argument(
                "last_sat: non-core operator encountered");
    }
}

}  // namespace

Formula derive(FormulaFactory& factory, Formula f, Valuation sym,
               const Alphabet& alphabet) {
    return derive_impl(factory, f, sym, atom_bits(factory, f, alphabet));
}

bool last_sat(FormulaFactory& factory, Formula f, Valuation sym,
              const Alphabet& alphabet) {
    return last_sat_impl(factory, f, sym, atom_bits(factory, f, alphabet));
}

Dfa build_dfa(FormulaFactory& factory, Formula f, const Alphabet& alphabet,
              uint32_t state_cap) {
    if (alphabet.size() > 16)
        throw ResourceError("explicit DFA alphabet limited to 16 atoms, got " +
                            std::to_string(alphabet.size()));
    Formula core = factory.desugar(f);
    const uint32_t num_syms = alphabet.num_symbols();

    // States are (obligation, accepted-here) pairs: the bit records whether
    // the trace consumed so far satisfies the original formula. Keeping the
    // bit in the state is what makes acceptance a state property; the
    // obligation alone cannot distinguish "trace may end here" cases.
    std::vector<int> bits = atom_bits(factory, core, alphabet);

    auto pack = [](uint32_t id, bool b) {
        return (static_cast<uint64_t>(id) << 1) | (b ? 1 : 0);
    };

    std::unordered_map<uint64_t, uint32_t> index;
    std::vector<std::pair<Formula, bool>> states;
    std::vector<uint32_t> delta;
    std::deque<uint32_t> queue;

    auto intern = [&](Formula g, bool b) {
        auto [it, inserted] = index.try_emplace(pack(g.id, b),
                                                static_cast<uint32_t>(states.size()));
        if (inserted) {
            states.emplace_back(g, b);
            queue.push_back(it->second);
            if (states.size() > state_cap)
                throw ResourceError("DFA state cap exceeded (cap " +
                                    std::to_string(state_cap) + ")");
        }
        return it->second;
    };

    std::unordered_map<uint64_t, std::pair<uint32_t, bool>> step_cache;

    intern(core, false);
    while (!queue.empty()) {
        uint32_t s = queue.front();
        queue.pop_front();
        Formula h = states[s].first;
        if (delta.size() < static_cast<size_t>(s + 1) * num_syms)
            delta.resize(static_cast<size_t>(s + 1) * num_syms);
        for (Valuation sym = 0; sym < num_syms; ++sym) {
            uint64_t key = (static_cast<uint64_t>(h.id) << 17) | sym;
            auto it = step_cache.find(key);
            std::pair<uint32_t, bool> next;
            if (it != step_cache.end()) {
                next = it->second;
            } else {
                Formula residual = derive_impl(factory, h, sym, bits);
                bool accepted = last_sat_impl(factory, h, sym, bits);
                next = {residual.id, accepted};
                step_cache.emplace(key, next);
            }
            delta[static_cast<size_t>(s) * num_syms + sym] =
                intern({next.first}, next.second);
        }
    }

    Dfa d;
    d.alphabet = alphabet;
    d.num_states = static_cast<uint32_t>(states.size());
    d.initial = 0;
    d.delta = std::move(delta);
    d.delta.resize(static_cast<size_t>(d.num_states) * num_syms);
    d.finals.resize(d.num_states);
    for (uint32_t i = 0; i < d.num_states; ++i) d.finals[i] = states[i].second;
    return minimize(d);
}

namespace {

Dfa restrict_reachable(const Dfa& d) {
    const uint32_t num_syms = d.num_symbols();
    std::vector<uint32_t> remap(d.num_states, UINT32_MAX);
    std::vector<uint32_t> order;
    remap[d.initial] = 0;
    order.push_back(d.initial);
    for (size_t i = 0; i < order.size(); ++i) {
        for (Valuation sym = 0; sym < num_syms; ++sym) {
            uint32_t t = d.step(order[i], sym);
            if (remap[t] == UINT32_MAX) {
                remap[t] = static_cast<uint32_t>(order.size());
                order.push_back(t);
            }
        }
    }
    Dfa r;
    r.alphabet = d.alphabet;
    r.num_states = static_cast<uint32_t>(order.size());
    r.initial = 0;
    r.delta.resize(static_cast<size_t>(r.num_states) * num_syms);
    r.finals.resize(r.num_states);
    for (uint32_t i = 0; i < r.num_states; ++i) {
        uint32_t old = order[i];
        r.finals[i] = d.finals[old];
        for (Valuation sym = 0; sym < num_syms; ++sym)
            r.delta[static_cast<size_t>(i) * num_syms + sym] =
                remap[d.step(old, sym)];
    }
    return r;
}

}  // namespace

Dfa minimize(const Dfa& input) {
    Dfa d = restrict_reachable(input);
    const uint32_t n = d.num_states;
    const uint32_t num_syms = d.num_symbols();

    // Inverse transitions as flat offset lists, one segment per symbol.
    std::vector<uint32_t> inv_flat(static_cast<size_t>(n) * num_syms);
    std::vector<uint32_t> inv_off(static_cast<size_t>(num_syms) * (n + 1), 0);
    for (Valuation sym = 0; sym < num_syms; ++sym) {
        uint32_t* counts = &inv_off[static_cast<size_t>(sym) * (n + 1)];
        for (uint32_t s = 0; s < n; ++s) ++counts[d.step(s, sym) + 1];
        for (uint32_t t = 0; t < n; ++t) counts[t + 1] += counts[t];
        std::vector<uint32_t> fill(n, 0);
        for (uint32_t s = 0; s < n; ++s) {
            uint32_t t = d.step(s, sym);
            inv_flat[static_cast<size_t>(sym) * n + counts[t] + fill[t]] = s;
            ++fill[t];
        }
    }

    // Hopcroft block bookkeeping.
    std::vector<uint32_t> block_of(n);
    std::vector<std::vector<uint32_t>> blocks;
    {
        std::vector<uint32_t> fin, nonfin;
        for (uint32_t s = 0; s < n; ++s)
            (d.finals[s] ? fin : nonfin).push_back(s);
        if (!nonfin.empty()) blocks.push_back(std::move(nonfin));
        if (!fin.empty()) blocks.push_back(std::move(fin));
        for (uint32_t b = 0; b < blocks.size(); ++b)
            for (uint32_t s : blocks[b]) block_of[s] = b;
    }

    std::deque<std::pair<uint32_t, Valuation>> worklist;
    std::vector<std::vector<char>> in_work;
    auto push_work = [&](uint32_t b, Valuation sym) {
        if (in_work.size() <= b) in_work.resize(b + 1, std::vector<char>(num_syms, 0));
        if (!in_work[b][sym]) {
            in_work[b][sym] = 1;
            worklist.emplace_back(b, sym);
        }
    };
    for (Valuation sym = 0; sym < num_syms; ++sym)
        for (uint32_t b = 0; b < blocks.size(); ++b) push_work(b, sym);

    while (!worklist.empty()) {
        auto [a, sym] = worklist.front();
        worklist.pop_front();
        in_work[a][sym] = 0;

        // Group the sym-predecessors of block a by their current block.
        std::map<uint32_t, std::vector<uint32_t>> splits;
        const uint32_t* off = &inv_off[static_cast<size_t>(sym) * (n + 1)];
        for (uint32_t t : blocks[a]) {
            for (uint32_t k = off[t]; k < off[t + 1]; ++k) {
                uint32_t s = inv_flat[static_cast<size_t>(sym) * n + k];
                splits[block_of[s]].push_back(s);
            }
        }

        for (auto& [b, hit] : splits) {
            if (hit.size() == blocks[b].size()) continue;  // no split
            // Move the hit states out of block b into a new block.
            uint32_t nb = static_cast<uint32_t>(blocks.size());
            std::sort(hit.begin(), hit.end());
            std::vector<uint32_t> stay;
            stay.reserve(blocks[b].size() - hit.size());
            size_t hi = 0;
            std::sort(blocks[b].begin(), blocks[b].end());
            for (uint32_t s : blocks[b]) {
                if (hi < hit.size() && hit[hi] == s) { ++hi; continue; }
                stay.push_back(s);
            }
            blocks[b] = std::move(stay);
            for (uint32_t s : hit) block_of[s] = nb;
            blocks.push_back(std::move(hit));
            if (in_work.size() <= nb)
                in_work.resize(nb + 1, std::vector<char>(num_syms, 0));
            // A pending splitter for b must cover both halves; otherwise the
            // smaller half suffices.
            for (Valuation s2 = 0; s2 < num_syms; ++s2) {
                if (in_work[b][s2]) {
                    push_work(nb, s2);
                } else {
                    uint32_t smaller =
                        blocks[nb].size() < blocks[b].size() ? nb : b;
                    push_work(smaller, s2);
                }
            }
        }
    }

    // Canonical BFS renumbering over blocks.
    const uint32_t num_blocks = static_cast<uint32_t>(blocks.size());
    std::vector<uint32_t> new_id(num_blocks, UINT32_MAX);
    std::vector<uint32_t> order;
    new_id[block_of[d.initial]] = 0;
    order.push_back(block_of[d.initial]);
    for (size_t i = 0; i < order.size(); ++i) {
        uint32_t rep = blocks[order[i]][0];
        for (Valuation sym = 0; sym < num_syms; ++sym) {
            uint32_t tb = block_of[d.step(rep, sym)];
            if (new_id[tb] == UINT32_MAX) {
                new_id[tb] = static_cast<uint32_t>(order.size());
                order.push_back(tb);
            }
        }
    }

    Dfa m;
    m.alphabet = d.alphabet;
    m.num_states = static_cast<uint32_t>(order.size());
    m.initial = 0;
    m.delta.resize(static_cast<size_t>(m.num_states) * num_syms);
    m.finals.resize(m.num_states);
    for (uint32_t i = 0; i < m.num_states; ++i) {
        uint32_t rep = blocks[order[i]][0];
        m.finals[i] = d.finals[rep];
        for (Valuation sym = 0; sym < num_syms; ++sym)
            m.delta[static_cast<size_t>(i) * num_syms + sym] =
                new_id[block_of[d.step(rep, sym)]];
    }
    return m;
}

bool dfa_accepts(const Dfa& d, const Trace& trace) {
    if (trace.empty()) return false;
    uint32_t s = d.initial;
    for (Valuation sym : trace) {
        if (sym >= d.num_symbols())
            throw std::invalid_argument(
                "trace symbol has atoms outside the DFA alphabet");
        s = d.step(s, sym);
    }
    return d.is_final(s);
}

Dfa lift_dfa(const Dfa& d, const Alphabet& full) {
    if (full.size() > 16)
        throw ResourceError("explicit DFA alphabet limited to 16 atoms, got " +
                            std::to_string(full.size()));
    std::vector<int> pos;
    for (const auto& atom : d.alphabet.atoms) {
        auto idx = full.index_of(atom);
        if (!idx)
            throw std::invalid_argument("lift_dfa: atom '" + atom +
                                        "' missing from target alphabet");
        pos.push_back(static_cast<int>(*idx));
    }
    Dfa r;
    r.alphabet = full;
    r.num_states = d.num_states;
    r.initial = d.initial;
    r.finals = d.finals;
    const uint32_t full_syms = full.num_symbols();
    r.delta.resize(static_cast<size_t>(r.num_states) * full_syms);
    for (uint32_t s = 0; s < r.num_states; ++s) {
        for (Valuation fs = 0; fs < full_syms; ++fs) {
            Valuation sub = 0;
            for (size_t i = 0; i < pos.size(); ++i)
                sub |= ((fs >> pos[i]) & 1u) << i;
            r.delta[static_cast<size_t>(s) * full_syms + fs] = d.step(s, sub);
        }
    }
    return r;
}

bool dfa_isomorphic(const Dfa& a, const Dfa& b) {
    if (!(a.alphabet == b.alphabet) || a.num_states != b.num_states)
        return false;
    const uint32_t num_syms = a.num_symbols();
    std::vector<uint32_t> map_ab(a.num_states, UINT32_MAX);
    std::vector<uint32_t> order;
    map_ab[a.initial] = b.initial;
    order.push_back(a.initial);
    std::vector<char> seen_b(b.num_states, 0);
    seen_b[b.initial] = 1;
    for (size_t i = 0; i < order.size(); ++i) {
        uint32_t sa = order[i];
        uint32_t sb = map_ab[sa];
        if ((a.finals[sa] != 0) != (b.finals[sb] != 0)) return false;
        for (Valuation sym = 0; sym < num_syms; ++sym) {
            uint32_t ta = a.step(sa, sym);
            uint32_t tb = b.step(sb, sym);
            if (map_ab[ta] == UINT32_MAX) {
                if (seen_b[tb]) return false;
                map_ab[ta] = tb;
                seen_b[tb] = 1;
                order.push_back(ta);
            } else if (map_ab[ta] != tb) {
                return false;
            }
        }
    }
    return order.size() == a.num_states;
}

namespace {

struct Cube {
    Valuation care;   // bits that are fixed
    Valuation value;  // their values
};

/// Greedy cover of a symbol set by cubes, deterministic.
std::vector<Cube> cube_cover(const std::vector<Valuation>& symbols,
                             uint32_t num_bits) {
    std::vector<char> in_set(1u << num_bits, 0);
    for (Valuation v : symbols) in_set[v] = 1;
    std::vector<char> covered(1u << num_bits, 0);
    std::vector<Cube> cubes;
    for (Valuation v = 0; v < (1u << num_bits); ++v) {
        if (!in_set[v] || covered[v]) continue;
        Cube c{(1u << num_bits) - 1, v};
        for (uint32_t bit = 0; bit < num_bits; ++bit) {
            Valuation try_care = c.care & ~(1u << bit);
            // The widened cube must stay inside the set.
            bool ok = true;
            Valuation free_mask = ~try_care & ((1u << num_bits) - 1);
            for (Valuation sub = free_mask;; sub = (sub - 1) & free_mask) {
                Valuation w = (c.value & try_care) | sub;
                if (!in_set[w]) { ok = false; break; }
                if (sub == 0) break;
            }
            if (ok) {
                c.care = try_care;
                c.value &= try_care;
            }
        }
        Valuation free_mask = ~c.care & ((1u << num_bits) - 1);
        for (Valuation sub = free_mask;; sub = (sub - 1) & free_mask) {
            covered[c.value | sub] = 1;
            if (sub == 0) break;
        }
        cubes.push_back(c);
    }
    return cubes;
}

std::string cube_label(const Cube& c, const Alphabet& alphabet) {
    std::string out;
    for (uint32_t i = 0; i < alphabet.size(); ++i) {
        if (!((c.care >> i) & 1u)) continue;
        if (!out.empty()) out += ' ';
        if (!((c.value >> i) & 1u)) out += '!';
        out += alphabet.atoms[i];
    }
    return out.empty() ? "*" : out;
}

}  // namespace

std::string dfa_to_dot(const Dfa& d) {
    std::ostringstream os;
    os << "digraph dfa {\n  rankdir=LR;\n  node [shape=circle];\n";
    os << "  init [shape=point];\n  init -> q" << d.initial << ";\n";
    for (uint32_t s = 0; s < d.num_states; ++s) {
        os << "  q" << s << " [label=\"q" << s << "\""
           << (d.is_final(s) ? ", shape=doublecircle" : "") << "];\n";
    }
    for (uint32_t s = 0; s < d.num_states; ++s) {
        std::map<uint32_t, std::vector<Valuation>> by_target;
        for (Valuation sym = 0; sym < d.num_symbols(); ++sym)
            by_target[d.step(s, sym)].push_back(sym);
        for (const auto& [t, syms] : by_target) {
            std::string label;
            for (const Cube& c : cube_cover(syms, d.alphabet.size())) {
                if (!label.empty()) label += " | ";
                label += cube_label(c, d.alphabet);
            }
            os << "  q" << s << " -> q" << t << " [label=\"" << label
               << "\"];\n";
        }
    }
    os << "}\n";
    return os.str();
}

Alphabet goal_alphabet(const Spec& spec, Formula f) {
    std::set<std::string> atoms;
    spec.factory->collect_atoms(f, atoms);
    Alphabet sub;
    for (const std::string& atom : spec.alphabet().atoms)
        if (atoms.count(atom)) sub.atoms.push_back(atom);
    return sub;
}

std::vector<Dfa> build_goal_dfas(const Spec& spec, uint32_t state_cap) {
    std::vector<Dfa> out;
    out.reserve(spec.goals.size());
    for (const Goal& goal : spec.goals)
        out.push_back(build_dfa(*spec.factory, goal.formula,
                                goal_alphabet(spec, goal.formula), state_cap));
    return out;
}

std::vector<Dfa> lift_goal_dfas(const Spec& spec, const std::vector<Dfa>& dfas) {
    Alphabet full = spec.alphabet();
    std::vector<Dfa> out;
    out.reserve(dfas.size());
    for (const Dfa& d : dfas) out.push_back(lift_dfa(d, full));
    return out;
}

} // namespace mpsynth
