#include "support/naive.hpp"

#include <unordered_map>

namespace mpsynth::testing {

namespace {

void collect_subformulas(const FormulaFactory& fac, Formula f,
                         std::vector<Formula>& order,
                         std::unordered_map<uint32_t, uint32_t>& index) {
    if (index.count(f.id)) return;
    switch (fac.op(f)) {
        case Op::True:
        case Op::False:
        case Op::Atom:
            break;
        case Op::Not:
        case Op::Next:
        case Op::WeakNext:
        case Op::Eventually:
        case Op::Globally:
            collect_subformulas(fac, fac.lhs(f), order, index);
            break;
        default:
            collect_subformulas(fac, fac.lhs(f), order, index);
            collect_subformulas(fac, fac.rhs(f), order, index);
            break;
    }
    index.emplace(f.id, static_cast<uint32_t>(order.size()));
    order.push_back(f);
}

}  // namespace

bool eval_backward(const FormulaFactory& fac, const Alphabet& alphabet,
                   const Trace& trace, Formula f) {
    std::vector<Formula> order;
    std::unordered_map<uint32_t, uint32_t> index;
    collect_subformulas(fac, f, order, index);
    const size_t len = trace.size();
    const size_t m = order.size();
    // value[pos * m + k]: truth of subformula k at position pos.
    std::vector<char> value(len * m, 0);

    auto at = [&](Formula g, size_t pos) -> char {
        return value[pos * m + index.at(g.id)];
    };

    for (size_t rpos = len; rpos-- > 0;) {
        bool last = rpos + 1 == len;
        for (size_t k = 0; k < m; ++k) {
            Formula g = order[k];
            char v = 0;
            switch (fac.op(g)) {
                case Op::True: v = 1; break;
                case Op::False: v = 0; break;
                case Op::Atom: {
                    auto bit = alphabet.index_of(fac.atom_name(g));
                    v = bit && ((trace[rpos] >> *bit) & 1u);
                    break;
                }
                case Op::Not: v = !at(fac.lhs(g), rpos); break;
                case Op::And:
                    v = at(fac.lhs(g), rpos) && at(fac.rhs(g), rpos);
                    break;
                case Op::Or:
                    v = at(fac.lhs(g), rpos) || at(fac.rhs(g), rpos);
                    break;
                case Op::Implies:
                    v = !at(fac.lhs(g), rpos) || at(fac.rhs(g), rpos);
                    break;
                case Op::Iff:
                    v = at(fac.lhs(g), rpos) == at(fac.rhs(g), rpos);
                    break;
                case Op::Next: v = !last && at(fac.lhs(g), rpos + 1); break;
                case Op::WeakNext: v = last || at(fac.lhs(g), rpos + 1); break;
                case Op::Until:
                    v = at(fac.rhs(g), rpos) ||
                        (at(fac.lhs(g), rpos) && !last &&
                         value[(rpos + 1) * m + k]);
                    break;
                case Op::Release:
                    v = at(fac.rhs(g), rpos) &&
                        (at(fac.lhs(g), rpos) || last ||
                         value[(rpos + 1) * m + k]);
                    break;
                case Op::Eventually:
                    v = at(fac.lhs(g), rpos) ||
                        (!last && value[(rpos + 1) * m + k]);
                    break;
                case Op::Globally:
                    v = at(fac.lhs(g), rpos) &&
                        (last || value[(rpos + 1) * m + k]);
                    break;
            }
            value[rpos * m + k] = v;
        }
    }
    return value[index.at(f.id)] != 0;
}

namespace {

bool check_rec(const Dfa& dfa, const FormulaFactory& fac, Formula f,
               const Alphabet& alphabet, uint32_t max_len, Trace& trace,
               uint32_t state, std::string* mismatch) {
    if (!trace.empty()) {
        bool by_dfa = dfa.is_final(state);
        bool by_semantics = eval_backward(fac, alphabet, trace, f);
        if (by_dfa != by_semantics) {
            if (mismatch) {
                *mismatch = "formula " + fac.to_string(f) + " trace [";
                for (size_t i = 0; i < trace.size(); ++i) {
                    if (i) *mismatch += " ";
                    *mismatch += std::to_string(trace[i]);
                }
                *mismatch += "] dfa=" + std::to_string(by_dfa) +
                             " semantics=" + std::to_string(by_semantics);
            }
            return false;
        }
    }
    if (trace.size() == max_len) return true;
    for (Valuation sym = 0; sym < alphabet.num_symbols(); ++sym) {
        trace.push_back(sym);
        if (!check_rec(dfa, fac, f, alphabet, max_len, trace, dfa.step(state, sym),
                       mismatch))
            return false;
        trace.pop_back();
    }
    return true;
}

}  // namespace

bool dfa_matches_semantics(const Dfa& dfa, const FormulaFactory& factory,
                           Formula f, const Alphabet& alphabet,
                           uint32_t max_len, std::string* mismatch) {
    Trace trace;
    return check_rec(dfa, factory, f, alphabet, max_len, trace, dfa.initial,
                     mismatch);
}

WinRelation win_m_batched(const ProductArena& arena) {
    const uint32_t nC = 1u << arena.num_goals;
    WinRelation w;
    w.rel = PairRel(arena.num_states, arena.num_goals);
    w.rank.assign(static_cast<size_t>(arena.num_states) * nC, UINT32_MAX);

    for (uint32_t s = 0; s < arena.num_states; ++s) {
        GoalSet sat = arena.sat_goals(s);
        GoalSet c = sat;
        while (true) {
            w.rel.set(s, c);
            w.rank[static_cast<size_t>(s) * nC + c] = 0;
            if (c == 0) break;
            c = (c - 1) & sat;
        }
    }

    uint32_t layer = 0;
    while (true) {
        PairRel pred = pre_mc(arena, w.rel);
        PairRel grown = w.rel.union_with(pred);
        ++layer;
        if (grown == w.rel) break;
        for (uint32_t s = 0; s < arena.num_states; ++s)
            for (GoalSet c = 0; c < nC; ++c)
                if (grown.test(s, c) && !w.rel.test(s, c))
                    w.rank[static_cast<size_t>(s) * nC + c] = layer;
        w.rel = grown;
    }
    w.iterations = layer;
    return w;
}

} // namespace mpsynth::testing
