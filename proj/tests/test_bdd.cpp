#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mpsynth/bdd.hpp"

using namespace mpsynth;

namespace {

/// Truth table of a BoolFn over the first `k` variables.
uint64_t truth_table(BddEngine& e, BoolFn f, uint32_t k) {
    uint64_t table = 0;
    for (uint32_t m = 0; m < (1u << k); ++m) {
        std::vector<int8_t> assign(e.num_vars(), 0);
        for (uint32_t v = 0; v < k; ++v) assign[v] = (m >> v) & 1u;
        if (e.evaluate(f, assign)) table |= 1ull << m;
    }
    return table;
}

/// Random function over k variables built from random gates.
BoolFn random_fn(BddEngine& e, std::mt19937_64& rng, uint32_t k, int gates) {
    std::vector<BoolFn> pool;
    for (uint32_t v = 0; v < k; ++v) pool.push_back(e.var(v));
    pool.push_back(e.constant(true));
    pool.push_back(e.constant(false));
    for (int i = 0; i < gates; ++i) {
        BoolFn a = pool[rng() % pool.size()];
        BoolFn b = pool[rng() % pool.size()];
        switch (rng() % 4) {
            case 0: pool.push_back(e.apply_and(a, b)); break;
            case 1: pool.push_back(e.apply_or(a, b)); break;
            case 2: pool.push_back(e.apply_xor(a, b)); break;
            default: pool.push_back(e.negate(a)); break;
        }
    }
    return pool.back();
}

}  // namespace

TEST_CASE("terminals and projections are hash-consed") {
    BddEngine e;
    uint32_t x = e.new_var("x");
    CHECK(e.constant(true).id == 1);
    CHECK(e.constant(false).id == 0);
    CHECK(e.var(x) == e.var(x));
    CHECK_THROWS_AS(e.var(5), std::invalid_argument);
}

TEST_CASE("basic identities hold as id equalities") {
    BddEngine e;
    BoolFn x = e.var(e.new_var("x"));
    BoolFn y = e.var(e.new_var("y"));
    CHECK(e.apply_and(x, e.negate(x)) == e.constant(false));
    CHECK(e.apply_or(x, e.constant(false)) == x);
    CHECK(e.negate(e.negate(x)) == x);
    // De Morgan
    CHECK(e.negate(e.apply_and(x, y)) ==
          e.apply_or(e.negate(x), e.negate(y)));
    // absorption
    CHECK(e.apply_and(x, e.apply_or(x, y)) == x);
    // xor truth table
    BoolFn xr = e.apply_xor(x, y);
    CHECK(truth_table(e, xr, 2) == 0b0110);
}

TEST_CASE("cross-engine operands are rejected") {
    BddEngine e1, e2;
    BoolFn x = e1.var(e1.new_var("x"));
    BoolFn y = e2.var(e2.new_var("y"));
    CHECK_THROWS_AS(e1.apply_and(x, y), std::invalid_argument);
}

TEST_CASE("quantification") {
    BddEngine e;
    uint32_t xv = e.new_var("x");
    uint32_t yv = e.new_var("y");
    BoolFn x = e.var(xv), y = e.var(yv);
    CHECK(e.exists({xv}, e.apply_and(x, y)) == y);
    CHECK(e.forall({xv}, e.apply_or(x, y)) == y);
    CHECK(e.forall({xv}, x) == e.constant(false));
    CHECK(e.exists({}, y) == y);
}

TEST_CASE("quantifier duality on random functions") {
    BddEngine e;
    for (int v = 0; v < 6; ++v) e.new_var("v" + std::to_string(v));
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        BoolFn f = random_fn(e, rng, 6, 12);
        std::vector<uint32_t> vars;
        for (uint32_t v = 0; v < 6; ++v)
            if (rng() % 2) vars.push_back(v);
        BoolFn all = e.forall(vars, f);
        BoolFn dual = e.negate(e.exists(vars, e.negate(f)));
        CHECK(all == dual);
    }
}

TEST_CASE("canonicity: equal truth tables iff equal ids") {
    BddEngine e;
    for (int v = 0; v < 6; ++v) e.new_var("v" + std::to_string(v));
    std::mt19937_64 rng(9);
    for (int i = 0; i < 300; ++i) {
        BoolFn f = random_fn(e, rng, 6, 10);
        BoolFn g = random_fn(e, rng, 6, 10);
        CHECK((truth_table(e, f, 6) == truth_table(e, g, 6)) == (f == g));
    }
}

TEST_CASE("compose substitutes simultaneously") {
    BddEngine e;
    uint32_t xv = e.new_var("x");
    uint32_t yv = e.new_var("y");
    uint32_t zv = e.new_var("z");
    BoolFn x = e.var(xv), y = e.var(yv), z = e.var(zv);

    CHECK(e.compose(z, {{zv, e.apply_and(x, y)}}) == e.apply_and(x, y));
    CHECK(e.compose(z, {}) == z);

    // Swap x and y in x & !y: simultaneous semantics must not chain.
    BoolFn f = e.apply_and(x, e.negate(y));
    BoolFn swapped = e.compose(f, {{xv, y}, {yv, x}});
    CHECK(swapped == e.apply_and(y, e.negate(x)));

    CHECK_THROWS_AS(e.compose(f, {{xv, y}, {xv, z}}), std::invalid_argument);
}

TEST_CASE("compose with constants restricts") {
    BddEngine e;
    uint32_t xv = e.new_var("x");
    uint32_t yv = e.new_var("y");
    BoolFn x = e.var(xv), y = e.var(yv);
    BoolFn f = e.apply_or(e.apply_and(x, y), e.negate(x));
    CHECK(e.compose(f, {{xv, e.constant(true)}}) == y);
    CHECK(e.compose(f, {{xv, e.constant(false)}}) == e.constant(true));
}

TEST_CASE("evaluate and pick_assignment") {
    BddEngine e;
    uint32_t xv = e.new_var("x");
    uint32_t yv = e.new_var("y");
    BoolFn x = e.var(xv), y = e.var(yv);
    BoolFn f = e.apply_and(x, y);
    CHECK(e.evaluate(f, {1, 1}));
    CHECK_FALSE(e.evaluate(f, {1, 0}));
    CHECK_THROWS_AS(e.evaluate(f, {1, -1}), std::invalid_argument);

    CHECK_FALSE(e.pick_assignment(e.constant(false), {xv, yv}).has_value());
    auto picked = e.pick_assignment(e.apply_or(x, y), {xv, yv});
    REQUIRE(picked.has_value());
    std::vector<int8_t> assign{(*picked)[0], (*picked)[1]};
    CHECK(e.evaluate(e.apply_or(x, y), assign));
    // prefers the false branch: x=0, y=1
    CHECK_FALSE((*picked)[0]);
    CHECK((*picked)[1]);
}

TEST_CASE("pick satisfies on random functions") {
    BddEngine e;
    std::vector<uint32_t> vars;
    for (int v = 0; v < 6; ++v) vars.push_back(e.new_var("v" + std::to_string(v)));
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
        BoolFn f = random_fn(e, rng, 6, 12);
        auto picked = e.pick_assignment(f, vars);
        if (!picked) {
            CHECK(f == e.constant(false));
            continue;
        }
        std::vector<int8_t> assign(e.num_vars(), 0);
        for (size_t j = 0; j < vars.size(); ++j) assign[vars[j]] = (*picked)[j];
        CHECK(e.evaluate(f, assign));
    }
}

TEST_CASE("apply node-count product bound") {
    BddEngine e;
    for (int v = 0; v < 8; ++v) e.new_var("v" + std::to_string(v));
    std::mt19937_64 rng(21);
    for (int i = 0; i < 50; ++i) {
        BoolFn f = random_fn(e, rng, 8, 14);
        BoolFn g = random_fn(e, rng, 8, 14);
        size_t nf = e.reachable_nodes(f);
        size_t ng = e.reachable_nodes(g);
        CHECK(e.reachable_nodes(e.apply_and(f, g)) <= nf * ng);
    }
}

TEST_CASE("node ceiling aborts cleanly") {
    BddEngine e(16);
    std::vector<BoolFn> vars;
    for (int v = 0; v < 12; ++v) vars.push_back(e.var(e.new_var("v" + std::to_string(v))));
    CHECK_THROWS_AS(
        [&] {
            BoolFn acc = e.constant(false);
            for (int i = 0; i + 1 < 12; i += 2)
                acc = e.apply_or(acc, e.apply_xor(vars[i], vars[i + 1]));
            return acc;
        }(),
        ResourceError);
}

TEST_CASE("cube builds the conjunction of literals") {
    BddEngine e;
    uint32_t xv = e.new_var("x");
    uint32_t yv = e.new_var("y");
    BoolFn expected =
        e.apply_and(e.var(xv), e.negate(e.var(yv)));
    CHECK(e.cube({{xv, true}, {yv, false}}) == expected);
}

TEST_CASE("stats and dot output") {
    BddEngine e;
    uint32_t xv = e.new_var("x");
    BoolFn x = e.var(xv);
    (void)e.apply_and(x, x);
    auto stats = e.stats();
    CHECK(stats.live_nodes >= 3);
    std::string dot = e.to_dot(x);
    CHECK(dot.find("digraph") != std::string::npos);
}
