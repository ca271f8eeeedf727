#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpsynth/errors.hpp"

namespace mpsynth {

class BddEngine;

/// Handle to a Boolean function inside one engine. Canonicity makes id
/// equality coincide with semantic equivalence (within the owning engine).
struct BoolFn {
    const BddEngine* engine = nullptr;
    uint32_t id = 0;

    bool operator==(const BoolFn&) const = default;
};

/// Reduced ordered BDD store: unique node table, lossy operation cache,
/// static variable order (creation order). One engine is owned by one
/// logical task at a time; independent solves use independent engines.
class BddEngine {
public:
    static constexpr size_t kDefaultNodeCeiling = 4u << 20;

    struct Stats {
        size_t live_nodes = 0;
        uint64_t cache_hits = 0;
        uint64_t cache_lookups = 0;
    };

    explicit BddEngine(size_t node_ceiling = kDefaultNodeCeiling);

    /// Registers a fresh variable at the bottom of the order.
    uint32_t new_var(std::string name);
    uint32_t num_vars() const { return static_cast<uint32_t>(var_names_.size()); }
    const std::string& var_name(uint32_t v) const { return var_names_[v]; }

    BoolFn constant(bool value) const { return {this, value ? 1u : 0u}; }
    BoolFn var(uint32_t v);

    BoolFn negate(BoolFn f);
    BoolFn apply_and(BoolFn f, BoolFn g);
    BoolFn apply_or(BoolFn f, BoolFn g);
    BoolFn apply_xor(BoolFn f, BoolFn g);
    BoolFn ite(BoolFn f, BoolFn g, BoolFn h);

    BoolFn exists(const std::vector<uint32_t>& vars, BoolFn f);
    BoolFn forall(const std::vector<uint32_t>& vars, BoolFn f);

    /// Simultaneous substitution of variables by functions.
    BoolFn compose(BoolFn f,
                   const std::vector<std::pair<uint32_t, BoolFn>>& bindings);

    /// Conjunction of literals, handy for state encodings.
    BoolFn cube(const std::vector<std::pair<uint32_t, bool>>& literals);

    /// Follows one root-to-terminal path; the assignment must cover the
    /// support (entry -1 = unassigned, 0/1 = value).
    bool evaluate(BoolFn f, const std::vector<int8_t>& assignment) const;

    /// Some satisfying assignment restricted to `over` (false off the
    /// satisfying path), or nullopt iff f is the zero function. Walks the
    /// diagram preferring the false cofactor per variable in order.
    std::optional<std::vector<bool>> pick_assignment(
        BoolFn f, const std::vector<uint32_t>& over) const;

    size_t reachable_nodes(BoolFn f) const;
    size_t live_nodes() const { return nodes_.size() - free_count_; }
    Stats stats() const;
    void clear_cache();

    std::string to_dot(BoolFn f) const;

private:
    struct Node {
        uint32_t var;
        uint32_t low;
        uint32_t high;
    };

    enum OpCode : uint8_t { kAnd = 1, kOr, kXor, kNot, kIte, kQuant, kCompose };

    uint32_t mk(uint32_t var, uint32_t low, uint32_t high);
    uint32_t do_and(uint32_t f, uint32_t g);
    uint32_t do_or(uint32_t f, uint32_t g);
    uint32_t do_xor(uint32_t f, uint32_t g);
    uint32_t do_not(uint32_t f);
    uint32_t do_ite(uint32_t f, uint32_t g, uint32_t h);
    uint32_t do_quant(uint32_t f, bool universal, uint64_t ctx);
    uint32_t do_compose(uint32_t f, uint64_t ctx);

    void check_engine(BoolFn f) const;
    uint32_t level(uint32_t node) const { return nodes_[node].var; }

    // Unique table: open addressing over node ids.
    void rehash();
    uint32_t table_lookup(uint32_t var, uint32_t low, uint32_t high) const;

    // Operation cache: direct-mapped, lossy.
    bool cache_get(uint64_t a, uint64_t b, uint32_t& out) const;
    void cache_put(uint64_t a, uint64_t b, uint32_t result);

    std::vector<Node> nodes_;
    std::vector<uint32_t> table_;  // slots hold node ids or kEmptySlot
    size_t table_mask_ = 0;
    size_t free_count_ = 0;
    size_t node_ceiling_;

    struct CacheEntry {
        uint64_t a = 0;
        uint64_t b = 0;
        uint32_t result = 0;
    };
    mutable std::vector<CacheEntry> cache_;
    mutable uint64_t cache_hits_ = 0;
    mutable uint64_t cache_lookups_ = 0;
    uint64_t op_context_ = 0;

    // Scratch for quantify/compose calls.
    std::vector<char> quant_mask_;
    uint32_t quant_max_level_ = 0;
    std::vector<uint32_t> compose_map_;
    uint32_t compose_max_level_ = 0;

    std::vector<std::string> var_names_;
};

} // namespace mpsynth
