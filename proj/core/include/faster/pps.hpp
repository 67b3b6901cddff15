#pragma once
// Progressive Profile Scheduling: runs the three-stage pipeline, walks
// the sorted profile list with threshold pruning, invokes the matcher
// once per surviving pair, maintains transitive clusters, validates
// entity-level demand, and emits results while the run is in flight.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "faster/blocking.hpp"
#include "faster/graph.hpp"
#include "faster/matchers.hpp"
#include "faster/rules.hpp"

namespace faster {

// Pipeline components that an ablation run can switch off (RF = rule
// filtering, B = blocking, PPS = scheduling/pruning, T = transitive
// skip). Disabling RF implies disabling B: blocking is built on the
// filtered pairs.
struct DisableSet {
    bool rf = false;
    bool b = false;
    bool pps = false;
    bool t = false;

    // Parses "RF,B,PPS,T" (any subset, case-insensitive). Throws SchemaError.
    static DisableSet parse(const std::string& csv);
    std::string to_string() const;
};

struct RunConfig {
    std::optional<double> threshold; // overrides the query's threshold
    DisableSet disable;
    bool validate_demand = true; // false = progressive baseline error mode
    std::optional<uint64_t> max_comparisons;
    std::optional<uint64_t> max_results;
    std::optional<std::string> blocking_csv_path; // debug dump after stage 3
};

struct EmittedEntity {
    std::vector<std::string> members; // natural-sorted pids, size >= 2
    uint64_t emitted_at_comparisons = 0;
    bool demand_ok = false; // demand re-verified on the aggregated view
    double elapsed_ms = 0;

    nlohmann::json to_json() const;
};

struct RunStats {
    uint64_t comparisons = 0;
    uint64_t pruned_pairs = 0;
    uint64_t transitivity_skips = 0;
    uint64_t matches_confirmed = 0;
    uint64_t emissions = 0;

    size_t h1_matches = 0;
    size_t candidate_pair_count = 0;
    size_t filtered_pair_count = 0;
    size_t blocking_nodes = 0;
    size_t blocking_edges = 0;
    size_t blocks = 0;

    size_t profiles_scheduled = 0;          // N
    double avg_candidates_per_profile = 0;  // k'
    double elapsed_ms = 0;
    bool budget_exhausted = false;

    std::vector<std::pair<std::string, std::string>> confirmed_pairs; // sorted
    std::vector<EmittedEntity> emission_log;
    // (comparisons, recall) points; filled post-run by the harness,
    // which is the side that holds ground truth.
    std::vector<std::pair<uint64_t, double>> recall_curve;

    nlohmann::json to_json() const;
};

using EmitSink = std::function<void(const EmittedEntity&)>;

// Union-find over profile handles with per-root member lists. Merged
// pids report the same root; roots never split.
class ClusterSet {
public:
    void ensure(NodeHandle v);
    NodeHandle find(NodeHandle v);
    bool same(NodeHandle a, NodeHandle b);
    // Returns false when already united.
    bool unite(NodeHandle a, NodeHandle b);
    const std::vector<NodeHandle>& members(NodeHandle v);
    size_t cluster_count() const { return clusters_; }

private:
    std::unordered_map<NodeHandle, NodeHandle> parent_;
    std::unordered_map<NodeHandle, std::vector<NodeHandle>> members_;
    size_t clusters_ = 0;
};

// Aggregated attribute view over a member set, per the query's
// aggregation map: min/max/avg fold numeric values, vote picks the most
// frequent value (ties resolved canonically), any keeps the smallest
// value as an existence witness. Attributes without a configured mode
// default to vote. Absent values are ignored; an attribute absent in
// every member stays absent.
std::vector<std::pair<std::string, AttrValue>>
aggregate_view(const PropertyGraph& g, std::span<const NodeHandle> members,
               const Query& q);

// Entity-level demand: every predicate, re-checked against the view.
bool demand_ok_on_view(const std::vector<std::pair<std::string, AttrValue>>& view,
                       std::span<const DemandPredicate> demand);

// Runs stages 1-3 and the PPS loop. The sink observes EmittedEntity
// events in real time; emissions are prefix-consistent (a re-emission
// after cluster growth carries a superset member list, nothing is ever
// retracted). Throws MatcherFailure with the offending pair if the
// matcher throws.
RunStats run_pipeline(const PropertyGraph& g, const Query& q, const Matcher& matcher,
                      const RunConfig& cfg, const EmitSink& sink);

} // namespace faster
