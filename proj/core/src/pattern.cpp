#include "faster/pattern.hpp"

#include <algorithm>
#include <set>

#include "faster/errors.hpp"

namespace faster {

const char* demand_op_name(DemandOp op) {
    switch (op) {
    case DemandOp::lt: return "<";
    case DemandOp::le: return "<=";
    case DemandOp::eq: return "=";
    case DemandOp::ge: return ">=";
    case DemandOp::gt: return ">";
    case DemandOp::contains: return "contains";
    }
    return "?";
}

bool demand_holds(const DemandPredicate& p, const AttrValue& v) {
    if (v.is_absent()) return false;
    if (p.op == DemandOp::contains) {
        if (!v.is_text() || !p.value.is_text()) return false;
        return v.as_text().find(p.value.as_text()) != std::string::npos;
    }
    int cmp;
    if (v.is_number() && p.value.is_number()) {
        double a = v.as_number(), b = p.value.as_number();
        cmp = a < b ? -1 : (a > b ? 1 : 0);
    } else if (v.is_text() && p.value.is_text()) {
        cmp = v.as_text().compare(p.value.as_text());
        cmp = cmp < 0 ? -1 : (cmp > 0 ? 1 : 0);
    } else {
        return false; // mixed types never satisfy
    }
    switch (p.op) {
    case DemandOp::lt: return cmp < 0;
    case DemandOp::le: return cmp <= 0;
    case DemandOp::eq: return cmp == 0;
    case DemandOp::ge: return cmp >= 0;
    case DemandOp::gt: return cmp > 0;
    case DemandOp::contains: return false; // handled above
    }
    return false;
}

size_t GraphPattern::var_index(std::string_view var) const {
    for (size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].var == var) return i;
    }
    return npos;
}

void GraphPattern::validate() const {
    if (nodes.empty()) throw SchemaError("pattern.nodes", "pattern has no nodes");
    std::set<std::string> vars;
    for (const PatternNode& n : nodes) {
        if (n.var.empty()) throw SchemaError("pattern.nodes", "empty variable name");
        if (n.label.empty()) throw SchemaError("pattern.nodes", "empty label");
        if (!vars.insert(n.var).second)
            throw SchemaError("pattern.nodes", "duplicate variable " + n.var);
    }
    for (const PatternEdge& e : edges) {
        if (var_index(e.src) == npos) throw UndeclaredVariable(e.src);
        if (var_index(e.dst) == npos) throw UndeclaredVariable(e.dst);
        if (e.label.empty()) throw SchemaError("pattern.edges", "empty edge label");
    }
    size_t dx = var_index(duplicates.first);
    size_t dy = var_index(duplicates.second);
    if (dx == npos) throw UndeclaredVariable(duplicates.first);
    if (dy == npos) throw UndeclaredVariable(duplicates.second);
    if (dx == dy)
        throw SchemaError("pattern.duplicates", "duplicate pair must name two distinct variables");
    if (!labels_match(nodes[dx].label, nodes[dy].label) &&
        !labels_match(nodes[dy].label, nodes[dx].label)) {
        throw SchemaError("pattern.duplicates",
                          "duplicate pair variables must share a label");
    }

    // Weak connectivity, with x and x' counted as linked.
    std::vector<std::vector<size_t>> adj(nodes.size());
    auto link = [&](size_t a, size_t b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    };
    for (const PatternEdge& e : edges) link(var_index(e.src), var_index(e.dst));
    link(dx, dy);
    std::vector<bool> seen(nodes.size(), false);
    std::vector<size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        size_t v = stack.back();
        stack.pop_back();
        for (size_t u : adj[v]) {
            if (!seen[u]) {
                seen[u] = true;
                stack.push_back(u);
            }
        }
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
        throw SchemaError("pattern", "pattern is not weakly connected");
}

NodeHandle Match::at(std::string_view var) const {
    size_t i = pattern->var_index(var);
    if (i == GraphPattern::npos) throw UndeclaredVariable(std::string(var));
    return bound[i];
}

namespace {

struct EdgeConstraint {
    size_t other_var;
    bool outgoing;            // pattern edge points this var -> other
    std::optional<uint32_t> label; // nullopt = wildcard
};

// Search plan: var order plus, per var, the pattern edges into already
// bound vars. Vars are ordered smallest-candidate-set-first among those
// adjacent to the chosen prefix, falling back to the global minimum for
// patterns connected only through the duplicate link.
struct Plan {
    std::vector<size_t> order;
    std::vector<std::vector<EdgeConstraint>> bound_edges; // per order position
    std::vector<std::vector<const DemandPredicate*>> demands;
};

Plan make_plan(const PropertyGraph& g, const GraphPattern& q,
               std::span<const DemandPredicate> demand) {
    const size_t n = q.size();
    auto estimate = [&](size_t v) -> size_t {
        const std::string& l = q.nodes[v].label;
        return l == kWildcard ? g.node_count() : g.nodes_with_label(l).size();
    };

    std::vector<bool> chosen(n, false);
    Plan plan;
    for (size_t step = 0; step < n; ++step) {
        size_t best = GraphPattern::npos;
        bool best_adjacent = false;
        size_t best_est = 0;
        for (size_t v = 0; v < n; ++v) {
            if (chosen[v]) continue;
            bool adjacent = false;
            for (const PatternEdge& e : q.edges) {
                size_t a = q.var_index(e.src), b = q.var_index(e.dst);
                if ((a == v && chosen[b]) || (b == v && chosen[a])) adjacent = true;
            }
            size_t est = estimate(v);
            if (best == GraphPattern::npos || (adjacent && !best_adjacent) ||
                (adjacent == best_adjacent && est < best_est)) {
                best = v;
                best_adjacent = adjacent;
                best_est = est;
            }
        }
        chosen[best] = true;
        plan.order.push_back(best);
    }

    plan.bound_edges.resize(n);
    std::vector<size_t> position(n);
    for (size_t i = 0; i < n; ++i) position[plan.order[i]] = i;
    for (const PatternEdge& e : q.edges) {
        size_t a = q.var_index(e.src), b = q.var_index(e.dst);
        std::optional<uint32_t> label;
        if (e.label != kWildcard) {
            label = g.edge_label_id(e.label);
            if (!label) label = UINT32_MAX; // label absent from graph: no match possible
        }
        // Attach the constraint to whichever endpoint binds later.
        size_t late = position[a] > position[b] ? a : b;
        size_t other = late == a ? b : a;
        plan.bound_edges[position[late]].push_back({other, late == a, label});
    }

    plan.demands.resize(n);
    for (const DemandPredicate& p : demand) {
        size_t v = q.var_index(p.var);
        if (v == GraphPattern::npos) throw UnboundVariableInDemand(p.var);
        plan.demands[position[v]].push_back(&p);
    }
    return plan;
}

} // namespace

std::vector<Match> enumerate_matches(const PropertyGraph& g, const GraphPattern& q,
                                     std::span<const DemandPredicate> demand) {
    q.validate();
    const size_t n = q.size();
    Plan plan = make_plan(g, q, demand);

    const size_t dup_x = q.var_index(q.duplicates.first);
    const size_t dup_y = q.var_index(q.duplicates.second);

    std::vector<NodeHandle> bound(n);
    std::vector<std::vector<NodeHandle>> results;

    auto accept = [&](size_t step, NodeHandle h) -> bool {
        size_t var = plan.order[step];
        if (!labels_match(q.nodes[var].label, g.label_of(h))) return false;
        // A node is never its own duplicate.
        if (var == dup_x || var == dup_y) {
            size_t other = var == dup_x ? dup_y : dup_x;
            for (size_t s = 0; s < step; ++s) {
                if (plan.order[s] == other && bound[other] == h) return false;
            }
        }
        for (const EdgeConstraint& ec : plan.bound_edges[step]) {
            if (ec.label && *ec.label == UINT32_MAX) return false;
            NodeHandle src = ec.outgoing ? h : bound[ec.other_var];
            NodeHandle dst = ec.outgoing ? bound[ec.other_var] : h;
            bool ok = ec.label ? g.has_edge(src, *ec.label, dst)
                               : g.has_edge_any_label(src, dst);
            if (!ok) return false;
        }
        for (const DemandPredicate* p : plan.demands[step]) {
            if (!demand_holds_on_node(*p, g, h)) return false;
        }
        return true;
    };

    // Candidate generator: the tightest incident constraint wins — an
    // adjacency list when a neighbor is bound, else the label index.
    auto candidates = [&](size_t step) -> std::vector<NodeHandle> {
        size_t var = plan.order[step];
        std::span<const PropertyGraph::Arc> best_arcs;
        bool have_arcs = false;
        for (const EdgeConstraint& ec : plan.bound_edges[step]) {
            if (ec.label && *ec.label == UINT32_MAX) return {};
            NodeHandle anchor = bound[ec.other_var];
            std::span<const PropertyGraph::Arc> arcs =
                ec.outgoing ? (ec.label ? g.in_arcs_with_label(anchor, *ec.label)
                                        : g.in_arcs(anchor))
                            : (ec.label ? g.out_arcs_with_label(anchor, *ec.label)
                                        : g.out_arcs(anchor));
            if (!have_arcs || arcs.size() < best_arcs.size()) {
                best_arcs = arcs;
                have_arcs = true;
            }
        }
        std::vector<NodeHandle> out;
        if (have_arcs) {
            out.reserve(best_arcs.size());
            for (const auto& a : best_arcs) out.push_back(a.other);
            std::sort(out.begin(), out.end());
            out.erase(std::unique(out.begin(), out.end()), out.end());
            return out;
        }
        const std::string& l = q.nodes[var].label;
        std::span<const NodeHandle> pool =
            l == kWildcard ? g.nodes_natural() : g.nodes_with_label(l);
        return {pool.begin(), pool.end()};
    };

    auto search = [&](auto&& self, size_t step) -> void {
        if (step == n) {
            results.push_back(bound);
            return;
        }
        for (NodeHandle h : candidates(step)) {
            if (!accept(step, h)) continue;
            bound[plan.order[step]] = h;
            self(self, step + 1);
        }
    };
    search(search, 0);

    // Collapse the symmetric twin (x <-> x' swap) onto the variant with
    // the lower id bound to x, when both variants matched.
    std::sort(results.begin(), results.end());
    auto have = [&](const std::vector<NodeHandle>& b) {
        return std::binary_search(results.begin(), results.end(), b);
    };
    std::vector<Match> out;
    out.reserve(results.size());
    std::vector<NodeHandle> swapped;
    for (auto& b : results) {
        if (g.rank_of(b[dup_x]) > g.rank_of(b[dup_y])) {
            swapped = b;
            std::swap(swapped[dup_x], swapped[dup_y]);
            if (have(swapped)) continue;
        }
        out.push_back(Match{&q, std::move(b)});
    }
    std::sort(out.begin(), out.end(), [&](const Match& a, const Match& b) {
        for (size_t i = 0; i < n; ++i) {
            uint32_t ra = g.rank_of(a.bound[i]), rb = g.rank_of(b.bound[i]);
            if (ra != rb) return ra < rb;
        }
        return false;
    });
    return out;
}

std::vector<std::pair<NodeHandle, NodeHandle>>
candidate_pairs(std::span<const Match> matches, const GraphPattern& q,
                const PropertyGraph& g) {
    size_t dx = q.var_index(q.duplicates.first);
    size_t dy = q.var_index(q.duplicates.second);
    std::vector<std::pair<uint32_t, uint32_t>> ranks;
    ranks.reserve(matches.size());
    for (const Match& m : matches) {
        uint32_t a = g.rank_of(m.bound[dx]), b = g.rank_of(m.bound[dy]);
        ranks.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(ranks.begin(), ranks.end());
    ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
    std::vector<std::pair<NodeHandle, NodeHandle>> out;
    out.reserve(ranks.size());
    for (auto [ra, rb] : ranks)
        out.emplace_back(g.nodes_natural()[ra], g.nodes_natural()[rb]);
    return out;
}

} // namespace faster
