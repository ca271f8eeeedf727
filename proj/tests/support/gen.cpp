#include "support/gen.hpp"

namespace mpsynth::testing {

Formula random_formula(FormulaFactory& factory, std::mt19937_64& rng,
                       const std::vector<std::string>& atoms, uint32_t depth) {
    auto pick_atom = [&]() -> Formula {
        if (atoms.empty()) return factory.tru();
        return factory.atom(atoms[rng() % atoms.size()]);
    };
    if (depth == 0) {
        switch (rng() % 8) {
            case 0: return factory.tru();
            case 1: return factory.fls();
            default: return pick_atom();
        }
    }
    switch (rng() % 13) {
        case 0: return pick_atom();
        case 1: return factory.mk_not(random_formula(factory, rng, atoms, depth - 1));
        case 2:
            return factory.mk_and(random_formula(factory, rng, atoms, depth - 1),
                                  random_formula(factory, rng, atoms, depth - 1));
        case 3:
            return factory.mk_or(random_formula(factory, rng, atoms, depth - 1),
                                 random_formula(factory, rng, atoms, depth - 1));
        case 4:
            return factory.mk_implies(
                random_formula(factory, rng, atoms, depth - 1),
                random_formula(factory, rng, atoms, depth - 1));
        case 5:
            return factory.mk_iff(random_formula(factory, rng, atoms, depth - 1),
                                  random_formula(factory, rng, atoms, depth - 1));
        case 6: return factory.mk_next(random_formula(factory, rng, atoms, depth - 1));
        case 7:
            return factory.mk_weak_next(
                random_formula(factory, rng, atoms, depth - 1));
        case 8:
            return factory.mk_until(random_formula(factory, rng, atoms, depth - 1),
                                    random_formula(factory, rng, atoms, depth - 1));
        case 9:
            return factory.mk_release(
                random_formula(factory, rng, atoms, depth - 1),
                random_formula(factory, rng, atoms, depth - 1));
        case 10:
            return factory.mk_eventually(
                random_formula(factory, rng, atoms, depth - 1));
        case 11:
            return factory.mk_globally(
                random_formula(factory, rng, atoms, depth - 1));
        default: return pick_atom();
    }
}

Trace random_trace(std::mt19937_64& rng, uint32_t num_atoms, uint32_t max_len) {
    uint32_t len = 1 + static_cast<uint32_t>(rng() % max_len);
    Trace trace(len);
    for (uint32_t i = 0; i < len; ++i)
        trace[i] = static_cast<Valuation>(rng()) & ((1u << num_atoms) - 1);
    return trace;
}

Dfa random_dfa(std::mt19937_64& rng, const Alphabet& alphabet,
               uint32_t num_states) {
    Dfa d;
    d.alphabet = alphabet;
    d.num_states = num_states;
    d.initial = 0;
    d.delta.resize(static_cast<size_t>(num_states) * alphabet.num_symbols());
    for (auto& target : d.delta) target = rng() % num_states;
    d.finals.resize(num_states, 0);
    for (uint32_t s = 1; s < num_states; ++s) d.finals[s] = rng() % 5 < 2;
    return d;
}

Spec random_spec(std::mt19937_64& rng, uint32_t num_goals, uint32_t num_inputs,
                 uint32_t num_outputs, uint32_t depth) {
    Spec spec;
    spec.factory = std::make_shared<FormulaFactory>();
    std::vector<std::string> atoms;
    for (uint32_t i = 0; i < num_inputs; ++i) {
        spec.inputs.push_back("x" + std::to_string(i));
        atoms.push_back(spec.inputs.back());
    }
    for (uint32_t i = 0; i < num_outputs; ++i) {
        spec.outputs.push_back("y" + std::to_string(i));
        atoms.push_back(spec.outputs.back());
    }
    for (uint32_t g = 0; g < num_goals; ++g) {
        Formula f = random_formula(*spec.factory, rng, atoms, depth);
        spec.goals.push_back({"g" + std::to_string(g + 1), f});
    }
    return spec;
}

} // namespace mpsynth::testing
