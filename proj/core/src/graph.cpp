#include "faster/graph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "faster/csv.hpp"
#include "faster/natural_order.hpp"

namespace faster {

namespace {

const AttrValue kAbsent{};

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    return in;
}

void expect_header(CsvReader& r, std::initializer_list<const char*> cols) {
    auto rec = r.next_record();
    if (!rec || rec->size() != cols.size() ||
        !std::equal(cols.begin(), cols.end(), rec->begin(),
                    [](const char* a, const std::string& b) { return b == a; })) {
        throw MalformedRow(r.file(), r.record_line(), "bad or missing header");
    }
}

} // namespace

PropertyGraph PropertyGraph::load(const std::string& nodes_file,
                                  const std::string& edges_file) {
    PropertyGraph g;
    std::unordered_map<std::string, NodeHandle> by_id;

    {
        auto in = open_or_throw(nodes_file);
        CsvReader r(in, nodes_file);
        expect_header(r, {"id", "label", "attrs"});
        std::unordered_map<std::string, uint32_t> label_ids;
        while (auto rec = r.next_record()) {
            if (rec->size() != 3)
                throw MalformedRow(nodes_file, r.record_line(), "expected 3 fields");
            const std::string& id = (*rec)[0];
            const std::string& label = (*rec)[1];
            const std::string& attrs_json = (*rec)[2];
            if (id.empty())
                throw MalformedRow(nodes_file, r.record_line(), "empty node id");
            if (label.empty())
                throw MalformedRow(nodes_file, r.record_line(), "empty node label");
            if (by_id.count(id)) throw DuplicateNodeId(id);

            std::vector<std::pair<std::string, AttrValue>> attrs;
            if (!attrs_json.empty()) {
                nlohmann::json doc = nlohmann::json::parse(attrs_json, nullptr, false);
                if (doc.is_discarded() || !doc.is_object())
                    throw MalformedRow(nodes_file, r.record_line(),
                                       "attrs is not a JSON object");
                for (auto& [k, v] : doc.items()) {
                    try {
                        AttrValue av = attr_from_json(v);
                        if (!av.is_absent()) attrs.emplace_back(k, std::move(av));
                    } catch (const Error& e) {
                        throw MalformedRow(nodes_file, r.record_line(),
                                           "attr \"" + k + "\": " + e.what());
                    }
                }
                std::sort(attrs.begin(), attrs.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });
            }

            auto [it, fresh] = label_ids.try_emplace(label,
                                                     static_cast<uint32_t>(g.node_label_names_.size()));
            if (fresh) g.node_label_names_.push_back(label);

            NodeHandle h = static_cast<NodeHandle>(g.ids_.size());
            by_id.emplace(id, h);
            g.ids_.push_back(id);
            g.node_labels_.push_back(it->second);
            g.attrs_.push_back(std::move(attrs));
        }
    }

    {
        auto in = open_or_throw(edges_file);
        CsvReader r(in, edges_file);
        expect_header(r, {"src", "label", "dst"});
        std::unordered_map<std::string, uint32_t> label_ids;
        std::set<std::tuple<NodeHandle, uint32_t, NodeHandle>> seen;
        while (auto rec = r.next_record()) {
            if (rec->size() != 3)
                throw MalformedRow(edges_file, r.record_line(), "expected 3 fields");
            const std::string& src = (*rec)[0];
            const std::string& label = (*rec)[1];
            const std::string& dst = (*rec)[2];
            if (label.empty())
                throw MalformedRow(edges_file, r.record_line(), "empty edge label");
            auto si = by_id.find(src);
            if (si == by_id.end()) throw DanglingEdge(src, r.record_line());
            auto di = by_id.find(dst);
            if (di == by_id.end()) throw DanglingEdge(dst, r.record_line());

            auto [it, fresh] = label_ids.try_emplace(label,
                                                     static_cast<uint32_t>(g.edge_labels_.size()));
            if (fresh) g.edge_labels_.push_back(label);

            EdgeRec e{si->second, it->second, di->second};
            if (!seen.insert({e.src, e.label, e.dst}).second)
                throw MalformedRow(edges_file, r.record_line(),
                                   "duplicate edge " + src + " -" + label + "-> " + dst);
            g.edges_.push_back(e);
        }
    }

    g.build_indices();
    return g;
}

void PropertyGraph::build_indices() {
    const size_t n = ids_.size();

    // Natural rank of the original id strings.
    nodes_natural_.resize(n);
    std::iota(nodes_natural_.begin(), nodes_natural_.end(), NodeHandle{0});
    std::sort(nodes_natural_.begin(), nodes_natural_.end(),
              [&](NodeHandle a, NodeHandle b) { return natural_less(ids_[a], ids_[b]); });
    rank_.resize(n);
    for (uint32_t i = 0; i < n; ++i) rank_[nodes_natural_[i]] = i;

    out_.assign(n, {});
    in_.assign(n, {});
    for (const EdgeRec& e : edges_) {
        out_[e.src].push_back({e.label, e.dst});
        in_[e.dst].push_back({e.label, e.src});
    }
    auto arc_less = [&](const Arc& a, const Arc& b) {
        if (a.label != b.label) return a.label < b.label;
        return rank_[a.other] < rank_[b.other];
    };
    for (auto& v : out_) std::sort(v.begin(), v.end(), arc_less);
    for (auto& v : in_) std::sort(v.begin(), v.end(), arc_less);

    label_index_.clear();
    label_index_.resize(node_label_names_.size());
    for (uint32_t l = 0; l < node_label_names_.size(); ++l) label_index_[l].first = l;
    for (NodeHandle h : nodes_natural_) label_index_[node_labels_[h]].second.push_back(h);
}

void PropertyGraph::save(const std::string& nodes_file,
                         const std::string& edges_file) const {
    {
        std::ofstream out(nodes_file, std::ios::binary);
        if (!out) throw Error("cannot write file: " + nodes_file);
        write_csv_record(out, std::array<std::string, 3>{"id", "label", "attrs"});
        for (NodeHandle h = 0; h < ids_.size(); ++h) {
            nlohmann::json doc = nlohmann::json::object();
            for (const auto& [k, v] : attrs_[h]) doc[k] = attr_to_json(v);
            write_csv_record(out, std::array<std::string, 3>{
                                      ids_[h], node_label_names_[node_labels_[h]], doc.dump()});
        }
    }
    {
        std::ofstream out(edges_file, std::ios::binary);
        if (!out) throw Error("cannot write file: " + edges_file);
        write_csv_record(out, std::array<std::string, 3>{"src", "label", "dst"});
        for (const EdgeRec& e : edges_) {
            write_csv_record(out, std::array<std::string, 3>{
                                      ids_[e.src], edge_labels_[e.label], ids_[e.dst]});
        }
    }
}

std::optional<NodeHandle> PropertyGraph::find(std::string_view id) const {
    // Binary search over the natural-sorted handles; avoids keeping the
    // construction hash map alive.
    auto it = std::lower_bound(nodes_natural_.begin(), nodes_natural_.end(), id,
                               [&](NodeHandle h, std::string_view s) {
                                   return natural_compare(ids_[h], s) < 0;
                               });
    if (it != nodes_natural_.end() && ids_[*it] == id) return *it;
    // Natural order can interleave distinct strings that compare equal
    // (never for well-formed ids, but stay correct anyway).
    for (auto jt = it; jt != nodes_natural_.end() &&
                       natural_compare(ids_[*jt], id) == 0; ++jt) {
        if (ids_[*jt] == id) return *jt;
    }
    return std::nullopt;
}

NodeHandle PropertyGraph::require(std::string_view id) const {
    if (auto h = find(id)) return *h;
    throw UnknownNode(std::string(id));
}

const std::string& PropertyGraph::label_of(NodeHandle h) const {
    return node_label_names_[node_labels_[h]];
}

const AttrValue& PropertyGraph::attr_of(NodeHandle h, std::string_view name) const {
    const auto& attrs = attrs_[h];
    auto it = std::lower_bound(attrs.begin(), attrs.end(), name,
                               [](const auto& a, std::string_view s) { return a.first < s; });
    if (it != attrs.end() && it->first == name) return it->second;
    return kAbsent;
}

std::span<const NodeHandle> PropertyGraph::nodes_with_label(std::string_view label) const {
    for (const auto& [lid, nodes] : label_index_) {
        if (node_label_names_[lid] == label) return nodes;
    }
    return {};
}

std::optional<uint32_t> PropertyGraph::edge_label_id(std::string_view label) const {
    for (uint32_t i = 0; i < edge_labels_.size(); ++i) {
        if (edge_labels_[i] == label) return i;
    }
    return std::nullopt;
}

namespace {
std::span<const PropertyGraph::Arc> label_range(std::span<const PropertyGraph::Arc> arcs,
                                                uint32_t label) {
    auto lo = std::lower_bound(arcs.begin(), arcs.end(), label,
                               [](const PropertyGraph::Arc& a, uint32_t l) { return a.label < l; });
    auto hi = std::upper_bound(lo, arcs.end(), label,
                               [](uint32_t l, const PropertyGraph::Arc& a) { return l < a.label; });
    return {lo, hi};
}
} // namespace

std::span<const PropertyGraph::Arc>
PropertyGraph::out_arcs_with_label(NodeHandle h, uint32_t label) const {
    return label_range(out_[h], label);
}

std::span<const PropertyGraph::Arc>
PropertyGraph::in_arcs_with_label(NodeHandle h, uint32_t label) const {
    return label_range(in_[h], label);
}

bool PropertyGraph::has_edge(NodeHandle src, uint32_t label, NodeHandle dst) const {
    for (const Arc& a : out_arcs_with_label(src, label)) {
        if (a.other == dst) return true;
    }
    return false;
}

bool PropertyGraph::has_edge_any_label(NodeHandle src, NodeHandle dst) const {
    for (const Arc& a : out_[src]) {
        if (a.other == dst) return true;
    }
    return false;
}

std::vector<NodeHandle> PropertyGraph::neighbors(NodeHandle h,
                                                 std::optional<std::string_view> label,
                                                 Direction dir) const {
    std::optional<uint32_t> lid;
    if (label) {
        lid = edge_label_id(*label);
        if (!lid) return {}; // label never occurs in this graph
    }
    std::vector<NodeHandle> result;
    auto collect = [&](std::span<const Arc> arcs) {
        if (lid) arcs = label_range(arcs, *lid);
        for (const Arc& a : arcs) result.push_back(a.other);
    };
    if (dir == Direction::out || dir == Direction::both) collect(out_[h]);
    if (dir == Direction::in || dir == Direction::both) collect(in_[h]);
    std::sort(result.begin(), result.end(),
              [&](NodeHandle a, NodeHandle b) { return rank_[a] < rank_[b]; });
    result.erase(std::unique(result.begin(), result.end()), result.end());
    return result;
}

std::vector<std::string> PropertyGraph::neighbors(std::string_view id,
                                                  std::optional<std::string_view> label,
                                                  Direction dir) const {
    std::vector<std::string> out;
    for (NodeHandle h : neighbors(require(id), label, dir)) out.push_back(ids_[h]);
    return out;
}

EntityProfile PropertyGraph::profile_of(NodeHandle h) const {
    EntityProfile p;
    p.pid = ids_[h];
    p.type = label_of(h);
    p.attrs = attrs_[h];
    p.relations.reserve(out_[h].size() + in_[h].size());
    for (const Arc& a : out_[h]) p.relations.emplace_back(edge_labels_[a.label], ids_[a.other]);
    for (const Arc& a : in_[h]) p.relations.emplace_back(edge_labels_[a.label], ids_[a.other]);
    std::sort(p.relations.begin(), p.relations.end(),
              [](const auto& a, const auto& b) {
                  if (a.first != b.first) return a.first < b.first;
                  return natural_less(a.second, b.second);
              });
    return p;
}

EntityProfile PropertyGraph::profile_of(std::string_view id) const {
    return profile_of(require(id));
}

bool PropertyGraph::same_graph(const PropertyGraph& other) const {
    if (node_count() != other.node_count() || edge_count() != other.edge_count())
        return false;
    for (NodeHandle h = 0; h < ids_.size(); ++h) {
        auto oh = other.find(ids_[h]);
        if (!oh) return false;
        if (label_of(h) != other.label_of(*oh)) return false;
        if (attrs_[h] != other.attrs_[*oh]) return false;
    }
    std::multiset<std::tuple<std::string, std::string, std::string>> a, b;
    for (const EdgeRec& e : edges_)
        a.insert({ids_[e.src], edge_labels_[e.label], ids_[e.dst]});
    for (const EdgeRec& e : other.edges_)
        b.insert({other.ids_[e.src], other.edge_labels_[e.label], other.ids_[e.dst]});
    return a == b;
}

std::vector<GroundTruthRow> load_ground_truth_rows(const std::string& path) {
    auto in = open_or_throw(path);
    CsvReader r(in, path);
    expect_header(r, {"pid", "eid"});
    std::vector<GroundTruthRow> rows;
    while (auto rec = r.next_record()) {
        if (rec->size() != 2)
            throw MalformedRow(path, r.record_line(), "expected 2 fields");
        rows.push_back({(*rec)[0], (*rec)[1]});
    }
    return rows;
}

} // namespace faster
