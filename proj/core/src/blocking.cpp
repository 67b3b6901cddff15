#include "faster/blocking.hpp"

#include <algorithm>
#include <numeric>

#include "faster/csv.hpp"
#include "faster/errors.hpp"

namespace faster {

size_t BlockingGraph::index_of(NodeHandle v) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), v,
                               [&](NodeHandle a, NodeHandle b) {
                                   return g_->rank_of(a) < g_->rank_of(b);
                               });
    if (it == nodes_.end() || *it != v) return nodes_.size();
    return static_cast<size_t>(it - nodes_.begin());
}

bool BlockingGraph::contains(NodeHandle v) const { return index_of(v) < nodes_.size(); }

uint32_t BlockingGraph::block_of(NodeHandle v) const {
    size_t i = index_of(v);
    if (i == nodes_.size()) throw UnknownProfile(g_->id_of(v));
    return node_block_[i];
}

std::optional<double> BlockingGraph::weight_of(NodeHandle a, NodeHandle b) const {
    size_t i = index_of(a);
    if (i == nodes_.size()) return std::nullopt;
    for (auto [ei, oi] : adj_[i]) {
        if (nodes_[oi] == b) return edges_[ei].weight;
    }
    return std::nullopt;
}

std::vector<std::pair<NodeHandle, double>> BlockingGraph::candidates_of(NodeHandle v) const {
    size_t i = index_of(v);
    if (i == nodes_.size()) throw UnknownProfile(g_->id_of(v));
    std::vector<std::pair<NodeHandle, double>> out;
    out.reserve(adj_[i].size());
    for (auto [ei, oi] : adj_[i]) out.emplace_back(nodes_[oi], edges_[ei].weight);
    std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return g_->rank_of(a.first) < g_->rank_of(b.first);
    });
    return out;
}

std::vector<std::pair<NodeHandle, double>>
BlockingGraph::candidates_of(std::string_view pid) const {
    auto h = g_->find(pid);
    if (!h) throw UnknownProfile(std::string(pid));
    return candidates_of(*h);
}

void BlockingGraph::dump_csv(std::ostream& out) const {
    write_csv_record(out, std::array<std::string, 4>{"pid_a", "pid_b", "weight", "rules"});
    for (const BlockingEdge& e : edges_) {
        std::string rules;
        for (size_t i = 0; i < e.rules.size(); ++i) {
            if (i) rules.push_back(';');
            rules += e.rules[i];
        }
        std::string w = attr_to_json(AttrValue::number(e.weight)).dump();
        write_csv_record(out, std::array<std::string, 4>{g_->id_of(e.a), g_->id_of(e.b),
                                                         w, rules});
    }
}

std::vector<uint32_t> connected_component_blocks(std::span<const NodeHandle> nodes,
                                                 std::span<const BlockingEdge> edges) {
    std::vector<size_t> parent(nodes.size());
    std::iota(parent.begin(), parent.end(), size_t{0});
    auto find = [&](size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };

    // Handles are unique per node; map handle -> position.
    std::vector<std::pair<NodeHandle, size_t>> pos;
    pos.reserve(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i) pos.emplace_back(nodes[i], i);
    std::sort(pos.begin(), pos.end());
    auto at = [&](NodeHandle h) {
        auto it = std::lower_bound(pos.begin(), pos.end(), h,
                                   [](const auto& p, NodeHandle x) { return p.first < x; });
        return it->second;
    };

    for (const BlockingEdge& e : edges) {
        size_t a = find(at(e.a)), b = find(at(e.b));
        if (a != b) parent[a] = b;
    }

    // Stable block ids: number components by first (natural-order) member.
    std::vector<uint32_t> block(nodes.size(), UINT32_MAX);
    uint32_t next = 0;
    for (size_t i = 0; i < nodes.size(); ++i) {
        size_t root = find(i);
        if (block[root] == UINT32_MAX) block[root] = next++;
        block[i] = block[root];
    }
    return block;
}

BlockingGraph build_blocking_graph(const PropertyGraph& g,
                                   std::span<const FilteredPair> filtered,
                                   Weighting weighting, const BlockAssignment& blocks) {
    BlockingGraph bg;
    bg.g_ = &g;

    for (const FilteredPair& fp : filtered) {
        bg.nodes_.push_back(fp.pair.first);
        bg.nodes_.push_back(fp.pair.second);
    }
    std::sort(bg.nodes_.begin(), bg.nodes_.end(),
              [&](NodeHandle a, NodeHandle b) { return g.rank_of(a) < g.rank_of(b); });
    bg.nodes_.erase(std::unique(bg.nodes_.begin(), bg.nodes_.end()), bg.nodes_.end());

    bg.edges_.reserve(filtered.size());
    for (const FilteredPair& fp : filtered) {
        // Zero-weight pairs never enter; filtering guarantees >= 1 rule.
        bg.edges_.push_back({fp.pair.first, fp.pair.second,
                             static_cast<double>(fp.rules.size()), fp.rules});
    }

    auto rebuild_adj = [&]() {
        bg.adj_.assign(bg.nodes_.size(), {});
        for (size_t ei = 0; ei < bg.edges_.size(); ++ei) {
            size_t ia = bg.index_of(bg.edges_[ei].a);
            size_t ib = bg.index_of(bg.edges_[ei].b);
            bg.adj_[ia].emplace_back(ei, ib);
            bg.adj_[ib].emplace_back(ei, ia);
        }
    };
    auto rebuild_blocks = [&]() {
        bg.node_block_ = blocks(bg.nodes_, bg.edges_);
        uint32_t max_block = 0;
        for (uint32_t b : bg.node_block_) max_block = std::max(max_block, b + 1);
        bg.block_sizes_.assign(max_block, 0);
        for (uint32_t b : bg.node_block_) ++bg.block_sizes_[b];
    };

    rebuild_adj();
    rebuild_blocks();

    if (weighting == Weighting::arcs) {
        // Reweight by summed inverse cardinality of common blocks. With
        // component blocks every edge lies in exactly one shared block;
        // the loop form keeps other assignments pluggable.
        std::vector<double> reweighted(bg.edges_.size(), 0.0);
        for (size_t ei = 0; ei < bg.edges_.size(); ++ei) {
            const BlockingEdge& e = bg.edges_[ei];
            uint32_t ba = bg.node_block_[bg.index_of(e.a)];
            uint32_t bb = bg.node_block_[bg.index_of(e.b)];
            if (ba == bb) {
                reweighted[ei] += static_cast<double>(e.rules.size()) /
                                  static_cast<double>(bg.block_sizes_[ba]);
            }
        }
        for (size_t ei = 0; ei < bg.edges_.size(); ++ei)
            bg.edges_[ei].weight = reweighted[ei];
        // Drop edges that lost all weight (possible only under a custom
        // assignment where a pair shares no block), then redo structure.
        std::erase_if(bg.edges_, [](const BlockingEdge& e) { return e.weight <= 0.0; });
        std::vector<NodeHandle> keep;
        for (const BlockingEdge& e : bg.edges_) {
            keep.push_back(e.a);
            keep.push_back(e.b);
        }
        std::sort(keep.begin(), keep.end(),
                  [&](NodeHandle a, NodeHandle b) { return g.rank_of(a) < g.rank_of(b); });
        keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
        bg.nodes_ = std::move(keep);
        rebuild_adj();
        rebuild_blocks();
    }

    return bg;
}

std::vector<SortedProfileEntry> sorted_profiles(const BlockingGraph& bg) {
    const PropertyGraph& g = bg.graph();
    std::vector<SortedProfileEntry> out;
    out.reserve(bg.nodes().size());
    for (NodeHandle v : bg.nodes()) {
        auto cands = bg.candidates_of(v);
        double sum = 0;
        for (const auto& [u, w] : cands) sum += w;
        out.push_back({v, bg.block_of(v),
                       cands.empty() ? 0.0 : sum / static_cast<double>(cands.size())});
    }
    std::sort(out.begin(), out.end(), [&](const SortedProfileEntry& a, const SortedProfileEntry& b) {
        if (a.avg_weight != b.avg_weight) return a.avg_weight > b.avg_weight;
        return g.rank_of(a.pid) < g.rank_of(b.pid);
    });
    return out;
}

} // namespace faster
