#include "support/fixture.hpp"

namespace mpsynth::testing {

std::string branch_fixture_mpl() {
    return "INPUTS: x1 x2\n"
           "OUTPUTS: y1 y2\n"
           "GOAL g1: (y1 <-> y2) U (y1 & !y2)\n"
           "GOAL g2: (y1 <-> y2) U ((y1 & !y2) | (y2 & !y1))\n"
           "GOAL g3: (y1 <-> y2) U ((y2 & !y1) | (y1 & !y2 & x1))\n";
}

BranchFixture make_branch_fixture() {
    BranchFixture fx;
    fx.spec = parse_spec(branch_fixture_mpl());

    Alphabet alphabet = fx.spec.alphabet();  // x1 x2 y1 y2
    const Valuation x1 = 1u << 0;
    const Valuation y1 = 1u << 2;
    const Valuation y2 = 1u << 3;

    // Shared 4-state skeleton: 0 = start, 1/2 via the y1 move (x1 forks),
    // 3 via the y2 move; 1..3 absorb; other moves loop at 0.
    Dfa skeleton;
    skeleton.alphabet = alphabet;
    skeleton.num_states = 4;
    skeleton.initial = 0;
    skeleton.delta.resize(4 * alphabet.num_symbols());
    for (Valuation sym = 0; sym < alphabet.num_symbols(); ++sym) {
        bool move_y1 = (sym & y1) && !(sym & y2);
        bool move_y2 = (sym & y2) && !(sym & y1);
        uint32_t target = 0;
        if (move_y1) target = (sym & x1) ? 1 : 2;
        if (move_y2) target = 3;
        skeleton.delta[0 * alphabet.num_symbols() + sym] = target;
        for (uint32_t s = 1; s < 4; ++s)
            skeleton.delta[s * alphabet.num_symbols() + sym] = s;
    }
    skeleton.finals.assign(4, 0);

    Dfa d1 = skeleton;
    d1.finals = {0, 1, 1, 0};
    Dfa d2 = skeleton;
    d2.finals = {0, 1, 1, 1};
    Dfa d3 = skeleton;
    d3.finals = {0, 1, 0, 1};
    fx.components = {d1, d2, d3};

    fx.arena = build_product(fx.components,
                             {fx.spec.input_mask(), fx.spec.output_mask()});
    fx.s0 = fx.arena.initial;
    fx.s1 = fx.arena.step(fx.s0, y1 | x1);
    fx.s2 = fx.arena.step(fx.s0, y1);
    fx.s3 = fx.arena.step(fx.s0, y2);
    return fx;
}

} // namespace mpsynth::testing
