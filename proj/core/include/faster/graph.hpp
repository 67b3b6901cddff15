#pragma once
// In-memory property graph: directed labeled multigraph with per-node
// attribute maps, dictionary-encoded labels, and adjacency/label indices.
// Node ids are opaque strings in files, mapped to dense handles
// internally; every public ordering uses the natural order of the
// original id strings. Immutable after load; reads are safe to share
// across threads without synchronization.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "faster/attr_value.hpp"
#include "faster/errors.hpp"

namespace faster {

using NodeHandle = uint32_t;

enum class Direction { out, in, both };

// Flat view over one node, as the resolution pipeline sees it.
// `eid` stays empty unless ground truth is attached by the caller;
// the dirty graph itself never carries entity ids.
struct EntityProfile {
    std::string pid;
    std::optional<std::string> eid;
    std::string type;
    std::vector<std::pair<std::string, AttrValue>> attrs; // sorted by name
    std::vector<std::pair<std::string, std::string>> relations; // (label, neighbor pid)
};

class PropertyGraph {
public:
    struct Arc {
        uint32_t label;
        NodeHandle other;
    };

    // Loads the CSV pair described in the file-format docs. Throws
    // MalformedRow, DuplicateNodeId, DanglingEdge.
    static PropertyGraph load(const std::string& nodes_file,
                              const std::string& edges_file);

    // Re-serializes to the same format (nodes in handle order, edges in
    // input order). load(save(g)) is an identical graph.
    void save(const std::string& nodes_file, const std::string& edges_file) const;

    size_t node_count() const { return ids_.size(); }
    size_t edge_count() const { return edges_.size(); }

    std::optional<NodeHandle> find(std::string_view id) const;
    NodeHandle require(std::string_view id) const; // throws UnknownNode

    const std::string& id_of(NodeHandle h) const { return ids_[h]; }
    const std::string& label_of(NodeHandle h) const;

    // Absent sentinel when the node has no such attribute.
    const AttrValue& attr_of(NodeHandle h, std::string_view name) const;
    const std::vector<std::pair<std::string, AttrValue>>& attrs_of(NodeHandle h) const {
        return attrs_[h];
    }

    // Natural-ordered handle lists.
    std::span<const NodeHandle> nodes_natural() const { return nodes_natural_; }
    std::span<const NodeHandle> nodes_with_label(std::string_view label) const;

    std::optional<uint32_t> edge_label_id(std::string_view label) const;
    const std::string& edge_label_name(uint32_t id) const { return edge_labels_[id]; }

    // Arcs sorted by (label id, natural rank of endpoint).
    std::span<const Arc> out_arcs(NodeHandle h) const { return out_[h]; }
    std::span<const Arc> in_arcs(NodeHandle h) const { return in_[h]; }
    std::span<const Arc> out_arcs_with_label(NodeHandle h, uint32_t label) const;
    std::span<const Arc> in_arcs_with_label(NodeHandle h, uint32_t label) const;

    bool has_edge(NodeHandle src, uint32_t label, NodeHandle dst) const;
    bool has_edge_any_label(NodeHandle src, NodeHandle dst) const;

    // Deduplicated neighbor ids in natural order; label nullopt = any.
    std::vector<NodeHandle> neighbors(NodeHandle h,
                                      std::optional<std::string_view> label,
                                      Direction dir) const;
    std::vector<std::string> neighbors(std::string_view id,
                                       std::optional<std::string_view> label,
                                       Direction dir) const;

    EntityProfile profile_of(NodeHandle h) const;
    EntityProfile profile_of(std::string_view id) const;

    // Natural order of the original id strings, precomputed per handle.
    bool id_less(NodeHandle a, NodeHandle b) const { return rank_[a] < rank_[b]; }
    uint32_t rank_of(NodeHandle h) const { return rank_[h]; }

    // Semantic equality (same ids, labels, attrs, edge multiset),
    // independent of row order. Used by round-trip tests.
    bool same_graph(const PropertyGraph& other) const;

private:
    struct EdgeRec {
        NodeHandle src;
        uint32_t label;
        NodeHandle dst;
    };

    void build_indices();

    std::vector<std::string> ids_;
    std::vector<uint32_t> node_labels_; // index into node_label_names_
    std::vector<std::string> node_label_names_;
    std::vector<std::vector<std::pair<std::string, AttrValue>>> attrs_;
    std::vector<EdgeRec> edges_; // input order, for save()
    std::vector<std::string> edge_labels_;

    std::vector<std::vector<Arc>> out_, in_;
    std::vector<NodeHandle> nodes_natural_;
    std::vector<uint32_t> rank_;
    std::vector<std::pair<uint32_t, std::vector<NodeHandle>>> label_index_; // by node label id
};

// Ground-truth side file: CSV `pid,eid`.
struct GroundTruthRow {
    std::string pid, eid;
};
std::vector<GroundTruthRow> load_ground_truth_rows(const std::string& path);

} // namespace faster
