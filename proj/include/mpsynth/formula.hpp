#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mpsynth/errors.hpp"

namespace mpsynth {

/// A valuation over an ordered atom list: bit i is atoms[i].
using Valuation = uint32_t;

/// A finite trace: one valuation per position.
using Trace = std::vector<Valuation>;

/// Ordered atom list shared by traces, automata and arenas.
struct Alphabet {
    std::vector<std::string> atoms;

    uint32_t size() const { return static_cast<uint32_t>(atoms.size()); }
    uint32_t num_symbols() const { return 1u << atoms.size(); }
    std::optional<uint32_t> index_of(std::string_view name) const;
    bool operator==(const Alphabet&) const = default;
};

enum class Op : uint8_t {
    True,
    False,
    Atom,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Next,      // strong: requires a successor position
    WeakNext,  // true at the last position
    Until,
    Release,
    Eventually,
    Globally,
};

bool is_core_op(Op op);

/// Handle into a FormulaFactory. Equal ids mean structurally equal
/// (normalized) formulas within the same factory.
struct Formula {
    uint32_t id = 0;
    bool operator==(const Formula&) const = default;
    bool operator<(const Formula& o) const { return id < o.id; }
};

/// Hash-consing store for formula nodes. Construction normalizes:
/// commutative operands are sorted, constants folded, double negation
/// eliminated, and the obvious temporal constant folds applied (X false,
/// WX true, phi U true, ...). Normalization keeps the obligation space of
/// the derivative DFA construction finite and small.
class FormulaFactory {
public:
    FormulaFactory();

    Formula tru() const { return {1}; }
    Formula fls() const { return {0}; }
    Formula atom(std::string_view name);
    Formula mk_not(Formula f);
    Formula mk_and(Formula a, Formula b);
    Formula mk_or(Formula a, Formula b);
    Formula mk_implies(Formula a, Formula b);
    Formula mk_iff(Formula a, Formula b);
    Formula mk_next(Formula f);
    Formula mk_weak_next(Formula f);
    Formula mk_until(Formula a, Formula b);
    Formula mk_release(Formula a, Formula b);
    Formula mk_eventually(Formula f);
    Formula mk_globally(Formula f);

    Op op(Formula f) const { return nodes_[f.id].op; }
    Formula lhs(Formula f) const { return {nodes_[f.id].lhs}; }
    Formula rhs(Formula f) const { return {nodes_[f.id].rhs}; }
    const std::string& atom_name(Formula f) const;

    /// Rewrites to the core operator set {true,false,atom,!,&,|,X,WX,U}.
    Formula desugar(Formula f);

    /// Minimal-parenthesis rendering; parse_formula round-trips it.
    std::string to_string(Formula f) const;

    void collect_atoms(Formula f, std::set<std::string>& out) const;
    size_t node_count() const { return nodes_.size(); }

private:
    struct Node {
        Op op;
        uint32_t lhs;
        uint32_t rhs;
    };

    Formula intern(Op op, uint32_t lhs, uint32_t rhs);
    Formula mk_junction(Op op, Formula a, Formula b);
    void print(Formula f, int context_prec, std::string& out) const;

    std::vector<Node> nodes_;
    std::unordered_map<uint64_t, uint32_t> unique_;
    std::vector<std::string> atom_names_;
    std::unordered_map<std::string, uint32_t> atom_ids_;
    std::unordered_map<uint32_t, uint32_t> desugar_memo_;
};

struct Goal {
    std::string label;
    Formula formula;
};

/// A multi-property synthesis problem: partitioned alphabet plus n goals.
/// Immutable after parsing; the factory owns every goal's nodes.
struct Spec {
    std::shared_ptr<FormulaFactory> factory;
    std::vector<std::string> inputs;   // environment-controlled
    std::vector<std::string> outputs;  // agent-controlled
    std::vector<Goal> goals;

    Alphabet alphabet() const;               // inputs then outputs, declared order
    Valuation input_mask() const;            // bits of the inputs in alphabet()
    Valuation output_mask() const;
    std::optional<uint32_t> goal_index(std::string_view label) const;
};

/// Parses one formula against a declared alphabet. Reports syntax errors
/// with line/column and undeclared atoms by name.
Formula parse_formula(FormulaFactory& factory, std::string_view text,
                      const std::set<std::string>& alphabet);

/// Parses the .mpl spec format:
///   INPUTS: a b ...
///   OUTPUTS: c d ...
///   GOAL label: formula     (one per line, at least one)
/// '#' starts a comment.
Spec parse_spec(std::string_view text);

/// Finite-trace satisfaction at a position. Undefined (throws) on empty
/// traces or out-of-range positions.
bool evaluate(const FormulaFactory& factory, const Alphabet& alphabet,
              const Trace& trace, Formula f, size_t pos);

} // namespace mpsynth
