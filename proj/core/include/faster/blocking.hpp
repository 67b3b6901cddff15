#pragma once
// Weighted blocking graph over the filtered candidate pairs, block
// derivation, and the SortedProfileList (pipeline stage 3 setup).

#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "faster/graph.hpp"
#include "faster/rules.hpp"

namespace faster {

struct BlockingEdge {
    NodeHandle a, b; // canonical natural order
    double weight;
    std::vector<std::string> rules;
};

class BlockingGraph {
public:
    std::span<const NodeHandle> nodes() const { return nodes_; } // natural order
    std::span<const BlockingEdge> edges() const { return edges_; }
    size_t edge_count() const { return edges_.size(); }

    size_t block_count() const { return block_sizes_.size(); }
    uint32_t block_of(NodeHandle v) const;
    size_t block_size(uint32_t block) const { return block_sizes_[block]; }

    bool contains(NodeHandle v) const;
    std::optional<double> weight_of(NodeHandle a, NodeHandle b) const;

    // Blocking-graph neighbors of v with edge weights, heaviest first,
    // ties in natural id order. Throws UnknownProfile.
    std::vector<std::pair<NodeHandle, double>> candidates_of(NodeHandle v) const;
    std::vector<std::pair<NodeHandle, double>> candidates_of(std::string_view pid) const;

    // Debug dump: pid_a,pid_b,weight,rules (rules ;-separated).
    void dump_csv(std::ostream& out) const;

    const PropertyGraph& graph() const { return *g_; }

private:
    friend BlockingGraph build_blocking_graph(
        const PropertyGraph&, std::span<const FilteredPair>, Weighting,
        const std::function<std::vector<uint32_t>(std::span<const NodeHandle>,
                                                  std::span<const BlockingEdge>)>&);

    size_t index_of(NodeHandle v) const;

    const PropertyGraph* g_ = nullptr;
    std::vector<NodeHandle> nodes_;
    std::vector<BlockingEdge> edges_;
    std::vector<std::vector<std::pair<size_t, size_t>>> adj_; // node idx -> (edge idx, other idx)
    std::vector<uint32_t> node_block_;
    std::vector<size_t> block_sizes_;
};

// Block assignment seam: maps (nodes, edges) to a block id per node
// position. The default derives connected components, the only block
// structure the weighting scheme needs here; alternative assignments
// (e.g. token blocks) can plug in.
using BlockAssignment = std::function<std::vector<uint32_t>(
    std::span<const NodeHandle>, std::span<const BlockingEdge>)>;

std::vector<uint32_t> connected_component_blocks(std::span<const NodeHandle> nodes,
                                                 std::span<const BlockingEdge> edges);

// count: weight = number of satisfied rules. arcs: two-pass — count
// weights first, derive blocks, then reweight each edge to
// sum over common blocks of rules/|block| and recompute blocks.
BlockingGraph build_blocking_graph(const PropertyGraph& g,
                                   std::span<const FilteredPair> filtered,
                                   Weighting weighting,
                                   const BlockAssignment& blocks = connected_component_blocks);

struct SortedProfileEntry {
    NodeHandle pid;
    uint32_t block;
    double avg_weight; // mean incident edge weight
};

// Every blocking-graph node once, by avg_weight descending, ties in
// natural id order.
std::vector<SortedProfileEntry> sorted_profiles(const BlockingGraph& bg);

// Tolerance for weight >= threshold under fractional (arcs) weights;
// count weights compare exactly.
inline constexpr double kArcsWeightTolerance = 1e-9;

inline bool weight_meets_threshold(double weight, double threshold, Weighting w) {
    if (w == Weighting::count) return weight >= threshold;
    return weight >= threshold - kArcsWeightTolerance;
}

} // namespace faster
