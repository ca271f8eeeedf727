#include "mpsynth/bdd.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <unordered_set>

namespace mpsynth {

namespace {

constexpr uint32_t kEmptySlot = UINT32_MAX;
constexpr uint32_t kTerminalLevel = UINT32_MAX;
constexpr size_t kCacheSlots = 1u << 18;

uint64_t mix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

uint64_t node_hash(uint32_t var, uint32_t low, uint32_t high) {
    return mix((static_cast<uint64_t>(var) << 40) ^
               (static_cast<uint64_t>(low) << 20) ^ high);
}

}  // namespace

BddEngine::BddEngine(size_t node_ceiling) : node_ceiling_(node_ceiling) {
    nodes_.push_back({kTerminalLevel, 0, 0});  // id 0: false
    nodes_.push_back({kTerminalLevel, 1, 1});  // id 1: true
    table_.assign(1u << 12, kEmptySlot);
    table_mask_ = table_.size() - 1;
    cache_.assign(kCacheSlots, {});
}

uint32_t BddEngine::new_var(std::string name) {
    var_names_.push_back(std::move(name));
    return num_vars() - 1;
}

void BddEngine::check_engine(BoolFn f) const {
    if (f.engine != this)
        throw std::invalid_argument("BoolFn belongs to a different engine");
}

void BddEngine::rehash() {
    std::vector<uint32_t> fresh(table_.size() * 2, kEmptySlot);
    size_t mask = fresh.size() - 1;
    for (uint32_t id : table_) {
        if (id == kEmptySlot) continue;
        const Node& n = nodes_[id];
        size_t slot = node_hash(n.var, n.low, n.high) & mask;
        while (fresh[slot] != kEmptySlot) slot = (slot + 1) & mask;
        fresh[slot] = id;
    }
    table_ = std::move(fresh);
    table_mask_ = mask;
}

uint32_t BddEngine::mk(uint32_t var, uint32_t low, uint32_t high) {
    if (low == high) return low;
    size_t slot = node_hash(var, low, high) & table_mask_;
    while (table_[slot] != kEmptySlot) {
        const Node& n = nodes_[table_[slot]];
        if (n.var == var && n.low == low && n.high == high) return table_[slot];
        slot = (slot + 1) & table_mask_;
    }
    if (nodes_.size() >= node_ceiling_)
        throw ResourceError("BDD node ceiling exceeded (" +
                            std::to_string(node_ceiling_) + " nodes)");
    uint32_t id = static_cast<uint32_t>(nodes_.size());
    nodes_.push_back({var, low, high});
    table_[slot] = id;
    if (nodes_.size() * 10 > table_.size() * 7) rehash();
    return id;
}

BoolFn BddEngine::var(uint32_t v) {
    if (v >= num_vars())
        throw std::invalid_argument("unknown BDD variable " + std::to_string(v));
    return {this, mk(v, 0, 1)};
}

bool BddEngine::cache_get(uint64_t a, uint64_t b, uint32_t& out) const {
    ++cache_lookups_;
    const CacheEntry& e = cache_[mix(a ^ mix(b)) & (kCacheSlots - 1)];
    if (e.a == a && e.b == b) {
        out = e.result;
        ++cache_hits_;
        return true;
    }
    return false;
}

void BddEngine::cache_put(uint64_t a, uint64_t b, uint32_t result) {
    cache_[mix(a ^ mix(b)) & (kCacheSlots - 1)] = {a, b, result};
}

uint32_t BddEngine::do_and(uint32_t f, uint32_t g) {
    if (f == 0 || g == 0) return 0;
    if (f == 1) return g;
    if (g == 1) return f;
    if (f == g) return f;
    if (f > g) std::swap(f, g);
    uint64_t a = (static_cast<uint64_t>(kAnd) << 32) | f;
    uint32_t result;
    if (cache_get(a, g, result)) return result;
    uint32_t lf = level(f), lg = level(g);
    uint32_t top = std::min(lf, lg);
    uint32_t f0 = lf == top ? nodes_[f].low : f;
    uint32_t f1 = lf == top ? nodes_[f].high : f;
    uint32_t g0 = lg == top ? nodes_[g].low : g;
    uint32_t g1 = lg == top ? nodes_[g].high : g;
    result = mk(top, do_and(f0, g0), do_and(f1, g1));
    cache_put(a, g, result);
    return result;
}

uint32_t BddEngine::do_or(uint32_t f, uint32_t g) {
    if (f == 1 || g == 1) return 1;
    if (f == 0) return g;
    if (g == 0) return f;
    if (f == g) return f;
    if (f > g) std::swap(f, g);
    uint64_t a = (static_cast<uint64_t>(kOr) << 32) | f;
    uint32_t result;
    if (cache_get(a, g, result)) return result;
    uint32_t lf = level(f), lg = level(g);
    uint32_t top = std::min(lf, lg);
    uint32_t f0 = lf == top ? nodes_[f].low : f;
    uint32_t f1 = lf == top ? nodes_[f].high : f;
    uint32_t g0 = lg == top ? nodes_[g].low : g;
    uint32_t g1 = lg == top ? nodes_[g].high : g;
    result = mk(top, do_or(f0, g0), do_or(f1, g1));
    cache_put(a, g, result);
    return result;
}

uint32_t BddEngine::do_xor(uint32_t f, uint32_t g) {
    if (f == g) return 0;
    if (f == 0) return g;
    if (g == 0) return f;
    if (f == 1) return do_not(g);
    if (g == 1) return do_not(f);
    if (f > g) std::swap(f, g);
    uint64_t a = (static_cast<uint64_t>(kXor) << 32) | f;
    uint32_t result;
    if (cache_get(a, g, result)) return result;
    uint32_t lf = level(f), lg = level(g);
    uint32_t top = std::min(lf, lg);
    uint32_t f0 = lf == top ? nodes_[f].low : f;
    uint32_t f1 = lf == top ? nodes_[f].high : f;
    uint32_t g0 = lg == top ? nodes_[g].low : g;
    uint32_t g1 = lg == top ? nodes_[g].high : g;
    result = mk(top, do_xor(f0, g0), do_xor(f1, g1));
    cache_put(a, g, result);
    return result;
}

uint32_t BddEngine::do_not(uint32_t f) {
    if (f <= 1) return f ^ 1u;
    uint64_t a = (static_cast<uint64_t>(kNot) << 32) | f;
    uint32_t result;
    if (cache_get(a, 0, result)) return result;
    result = mk(level(f), do_not(nodes_[f].low), do_not(nodes_[f].high));
    cache_put(a, 0, result);
    return result;
}

uint32_t BddEngine::do_ite(uint32_t f, uint32_t g, uint32_t h) {
    if (f == 1) return g;
    if (f == 0) return h;
    if (g == h) return g;
    if (g == 1 && h == 0) return f;
    if (g == 0 && h == 1) return do_not(f);
    uint64_t a = (static_cast<uint64_t>(kIte) << 32) | f;
    uint64_t b = (static_cast<uint64_t>(g) << 32) | h;
    uint32_t result;
    if (cache_get(a, b, result)) return result;
    uint32_t top = level(f);
    if (g > 1) top = std::min(top, level(g));
    if (h > 1) top = std::min(top, level(h));
    auto cof = [&](uint32_t x, bool hi) {
        if (x <= 1 || level(x) != top) return x;
        return hi ? nodes_[x].high : nodes_[x].low;
    };
    result = mk(top, do_ite(cof(f, false), cof(g, false), cof(h, false)),
                do_ite(cof(f, true), cof(g, true), cof(h, true)));
    cache_put(a, b, result);
    return result;
}

BoolFn BddEngine::negate(BoolFn f) {
    check_engine(f);
    return {this, do_not(f.id)};
}

BoolFn BddEngine::apply_and(BoolFn f, BoolFn g) {
    check_engine(f);
    check_engine(g);
    return {this, do_and(f.id, g.id)};
}

BoolFn BddEngine::apply_or(BoolFn f, BoolFn g) {
    check_engine(f);
    check_engine(g);
    return {this, do_or(f.id, g.id)};
}

BoolFn BddEngine::apply_xor(BoolFn f, BoolFn g) {
    check_engine(f);
    check_engine(g);
    return {this, do_xor(f.id, g.id)};
}

BoolFn BddEngine::ite(BoolFn f, BoolFn g, BoolFn h) {
    check_engine(f);
    check_engine(g);
    check_engine(h);
    return {this, do_ite(f.id, g.id, h.id)};
}

uint32_t BddEngine::do_quant(uint32_t f, bool universal, uint64_t ctx) {
    if (f <= 1) return f;
    if (level(f) > quant_max_level_) return f;
    uint64_t a = (ctx << 8) | kQuant;
    uint32_t result;
    if (cache_get(a, f, result)) return result;
    uint32_t v = level(f);
    uint32_t lo = do_quant(nodes_[f].low, universal, ctx);
    uint32_t hi = do_quant(nodes_[f].high, universal, ctx);
    if (quant_mask_[v])
        result = universal ? do_and(lo, hi) : do_or(lo, hi);
    else
        result = mk(v, lo, hi);
    cache_put(a, f, result);
    return result;
}

BoolFn BddEngine::exists(const std::vector<uint32_t>& vars, BoolFn f) {
    check_engine(f);
    quant_mask_.assign(num_vars(), 0);
    quant_max_level_ = 0;
    for (uint32_t v : vars) {
        if (v >= num_vars())
            throw std::invalid_argument("unknown BDD variable " + std::to_string(v));
        quant_mask_[v] = 1;
        quant_max_level_ = std::max(quant_max_level_, v);
    }
    if (vars.empty()) return f;
    return {this, do_quant(f.id, false, ++op_context_)};
}

BoolFn BddEngine::forall(const std::vector<uint32_t>& vars, BoolFn f) {
    check_engine(f);
    quant_mask_.assign(num_vars(), 0);
    quant_max_level_ = 0;
    for (uint32_t v : vars) {
        if (v >= num_vars())
            throw std::invalid_argument("unknown BDD variable " + std::to_string(v));
        quant_mask_[v] = 1;
        quant_max_level_ = std::max(quant_max_level_, v);
    }
    if (vars.empty()) return f;
    return {this, do_quant(f.id, true, ++op_context_)};
}

uint32_t BddEngine::do_compose(uint32_t f, uint64_t ctx) {
    if (f <= 1) return f;
    if (level(f) > compose_max_level_) return f;
    uint64_t a = (ctx << 8) | kCompose;
    uint32_t result;
    if (cache_get(a, f, result)) return result;
    uint32_t v = level(f);
    uint32_t lo = do_compose(nodes_[f].low, ctx);
    uint32_t hi = do_compose(nodes_[f].high, ctx);
    uint32_t sub = compose_map_[v];
    if (sub == kEmptySlot)
        result = do_ite(mk(v, 0, 1), hi, lo);
    else
        result = do_ite(sub, hi, lo);
    cache_put(a, f, result);
    return result;
}

BoolFn BddEngine::compose(
    BoolFn f, const std::vector<std::pair<uint32_t, BoolFn>>& bindings) {
    check_engine(f);
    if (bindings.empty()) return f;
    compose_map_.assign(num_vars(), kEmptySlot);
    compose_max_level_ = 0;
    for (const auto& [v, g] : bindings) {
        check_engine(g);
        if (v >= num_vars())
            throw std::invalid_argument("unknown BDD variable " + std::to_string(v));
        if (compose_map_[v] != kEmptySlot)
            throw std::invalid_argument("duplicate bound variable " +
                                        std::to_string(v));
        compose_map_[v] = g.id;
        compose_max_level_ = std::max(compose_max_level_, v);
    }
    return {this, do_compose(f.id, ++op_context_)};
}

BoolFn BddEngine::cube(const std::vector<std::pair<uint32_t, bool>>& literals) {
    uint32_t result = 1;
    // Build bottom-up so mk sees ordered children.
    std::vector<std::pair<uint32_t, bool>> sorted = literals;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& x, const auto& y) { return x.first > y.first; });
    for (const auto& [v, value] : sorted) {
        if (v >= num_vars())
            throw std::invalid_argument("unknown BDD variable " + std::to_string(v));
        result = value ? mk(v, 0, result) : mk(v, result, 0);
    }
    return {this, result};
}

bool BddEngine::evaluate(BoolFn f, const std::vector<int8_t>& assignment) const {
    check_engine(f);
    uint32_t cur = f.id;
    while (cur > 1) {
        uint32_t v = level(cur);
        if (v >= assignment.size() || assignment[v] < 0)
            throw std::invalid_argument("assignment missing variable " +
                                        std::to_string(v));
        cur = assignment[v] ? nodes_[cur].high : nodes_[cur].low;
    }
    return cur == 1;
}

std::optional<std::vector<bool>> BddEngine::pick_assignment(
    BoolFn f, const std::vector<uint32_t>& over) const {
    check_engine(f);
    if (f.id == 0) return std::nullopt;
    std::vector<bool> chosen(over.size(), false);
    uint32_t cur = f.id;
    while (cur > 1) {
        const Node& n = nodes_[cur];
        bool value = n.low == 0;  // prefer the false branch when satisfiable
        uint32_t next = value ? n.high : n.low;
        for (size_t i = 0; i < over.size(); ++i)
            if (over[i] == n.var) chosen[i] = value;
        cur = next;
    }
    return chosen;
}

size_t BddEngine::reachable_nodes(BoolFn f) const {
    check_engine(f);
    if (f.id <= 1) return 1;
    std::unordered_set<uint32_t> seen;
    std::vector<uint32_t> stack{f.id};
    while (!stack.empty()) {
        uint32_t id = stack.back();
        stack.pop_back();
        if (id <= 1 || !seen.insert(id).second) continue;
        stack.push_back(nodes_[id].low);
        stack.push_back(nodes_[id].high);
    }
    return seen.size();
}

BddEngine::Stats BddEngine::stats() const {
    return {live_nodes(), cache_hits_, cache_lookups_};
}

void BddEngine::clear_cache() {
    cache_.assign(kCacheSlots, {});
}

std::string BddEngine::to_dot(BoolFn f) const {
    check_engine(f);
    std::ostringstream os;
    os << "digraph bdd {\n";
    os << "  t0 [label=\"0\", shape=box];\n  t1 [label=\"1\", shape=box];\n";
    std::unordered_set<uint32_t> seen;
    std::vector<uint32_t> stack{f.id};
    auto name = [](uint32_t id) {
        return id <= 1 ? "t" + std::to_string(id) : "n" + std::to_string(id);
    };
    while (!stack.empty()) {
        uint32_t id = stack.back();
        stack.pop_back();
        if (id <= 1 || !seen.insert(id).second) continue;
        const Node& n = nodes_[id];
        os << "  n" << id << " [label=\"" << var_names_[n.var] << "\"];\n";
        os << "  n" << id << " -> " << name(n.low) << " [style=dashed];\n";
        os << "  n" << id << " -> " << name(n.high) << ";\n";
        stack.push_back(n.low);
        stack.push_back(n.high);
    }
    os << "  root [shape=point];\n  root -> " << name(f.id) << ";\n";
    os << "}\n";
    return os.str();
}

} // namespace mpsynth
