#pragma once
// Graph patterns and homomorphic match enumeration (pipeline stage 1).

#include <span>
#include <string>
#include <vector>

#include "faster/demand.hpp"
#include "faster/graph.hpp"

namespace faster {

// "*" is the label wildcard, for nodes and edges alike.
inline constexpr const char* kWildcard = "*";

inline bool labels_match(std::string_view pattern_label, std::string_view label) {
    return pattern_label == kWildcard || pattern_label == label;
}

struct PatternNode {
    std::string var;
    std::string label;
};

struct PatternEdge {
    std::string src;
    std::string label;
    std::string dst;
};

// A small template graph plus the designated duplicate pair (x, x')
// whose bindings are the candidate duplicates of a rule set. The
// pattern must be weakly connected once x and x' are considered linked
// (they range over the same entity type, so a rule may compare two
// otherwise unconnected matches).
struct GraphPattern {
    std::vector<PatternNode> nodes;
    std::vector<PatternEdge> edges;
    std::pair<std::string, std::string> duplicates;

    static constexpr size_t npos = static_cast<size_t>(-1);
    size_t var_index(std::string_view var) const;
    size_t size() const { return nodes.size(); }

    // Throws SchemaError / UndeclaredVariable on a malformed pattern.
    void validate() const;
};

// One homomorphism, bindings indexed by pattern var position. Keeps a
// pointer to its pattern; patterns outlive their matches.
struct Match {
    const GraphPattern* pattern = nullptr;
    std::vector<NodeHandle> bound;

    NodeHandle operator[](size_t var_idx) const { return bound[var_idx]; }
    NodeHandle at(std::string_view var) const;
};

// All homomorphisms of `q` into `g` whose bindings satisfy every demand
// predicate, with x = x' bindings excluded and symmetric x/x' twins
// collapsed to the one with the lower id bound to x. Sorted
// tuple-lexicographically by natural id order. Demand predicates are
// checked while binding, so failing subtrees are never expanded.
std::vector<Match> enumerate_matches(const PropertyGraph& g, const GraphPattern& q,
                                     std::span<const DemandPredicate> demand);

// Deduplicated canonical (smaller id first) duplicate-pair bindings of
// the matches, sorted.
std::vector<std::pair<NodeHandle, NodeHandle>>
candidate_pairs(std::span<const Match> matches, const GraphPattern& q,
                const PropertyGraph& g);

} // namespace faster
