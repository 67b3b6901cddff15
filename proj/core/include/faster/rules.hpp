#pragma once
// GDD rule language: distance constraints over pattern variables,
// rule/query documents, and constraint-based pair filtering (stage 2).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "faster/attr_value.hpp"
#include "faster/graph.hpp"
#include "faster/pattern.hpp"

namespace faster {

enum class ConstraintKind { attr_const, attr_attr, eid_const, eid_eid, rela_const, rela_rela };
enum class Metric { edit, absdiff, exact };

const char* constraint_kind_name(ConstraintKind k);
const char* metric_name(Metric m);

// One distance constraint:
//   attr_const  d(x.A, c) <= t          attr_attr  d(x.A1, x'.A2) <= t
//   eid_const   x.eid = c               eid_eid    x.eid = x'.eid
//   rela_const  x has relation A to c   rela_rela  x, x' share an A neighbor
// eid_* and rela_* are exact with threshold 0. For rela_* the attrs
// slot holds the relation label(s).
struct DistanceConstraint {
    ConstraintKind kind;
    std::vector<std::string> vars;  // 1 or 2 pattern variables
    std::vector<std::string> attrs; // 0..2
    std::optional<AttrValue> constant;
    Metric metric = Metric::exact;
    double threshold = 0;
};

struct GddRule {
    std::string id;
    std::vector<DistanceConstraint> lhs; // conjunctive
    std::vector<DistanceConstraint> rhs; // eid equality on the duplicate pair
};

enum class Weighting { count, arcs };
enum class AggMode { min, max, avg, vote, any };

const char* agg_mode_name(AggMode m);

// A parsed query document: pattern + demand + rule set + scheduling
// parameters. Rules share the pattern; satisfaction across rules is
// disjunctive and counted per rule for edge weights.
struct Query {
    GraphPattern pattern;
    std::vector<DemandPredicate> demand;
    std::vector<GddRule> rules;
    Weighting weighting = Weighting::count;
    double threshold = 2.0;
    std::vector<std::pair<std::string, AggMode>> aggregation; // sorted by attr

    std::optional<AggMode> agg_for(std::string_view attr) const;
};

// Strict parser for the JSON query format (docs/query-format.md);
// unknown fields are rejected. Throws SchemaError, UndeclaredVariable,
// BadThreshold.
Query parse_query(const std::string& path);
Query parse_query_json(const nlohmann::json& doc);
nlohmann::json query_to_json(const Query& q);

// True iff the constraint's distance is within its threshold under the
// given binding. Absent attributes and type mismatches are unsatisfied,
// never errors. `type_mismatch` (optional) is set when the constraint
// compared values of the wrong type (e.g. edit on numbers).
bool eval_constraint(const DistanceConstraint& c, const Match& m,
                     const PropertyGraph& g, bool* type_mismatch = nullptr);

struct FilteredPair {
    std::pair<NodeHandle, NodeHandle> pair; // canonical, natural order
    std::vector<std::string> rules;         // sorted ids of satisfied rules
};

// Stage 2: keep the candidate pairs that satisfy at least one rule's
// full lhs on some match binding the pair; a rule counts at most once
// per pair. Deterministic pair order.
std::vector<FilteredPair> filter_matches(std::span<const Match> matches,
                                         std::span<const GddRule> rules,
                                         const PropertyGraph& g);

struct SelectivityRow {
    std::string rule_id;
    size_t retained = 0;     // pairs satisfying this rule
    double beta = 0;         // retained / candidate pairs
    size_t type_mismatches = 0;
};

struct SelectivityReport {
    size_t candidate_pairs = 0;
    size_t retained_pairs = 0; // pairs satisfying >= 1 rule
    double beta_total = 0;
    std::vector<SelectivityRow> rows;

    nlohmann::json to_json() const;
};

// Per-rule retention profile over the query's stage-1 candidates; the
// basis for judging rule strictness.
SelectivityReport rule_selectivity_report(const Query& q, const PropertyGraph& g);

} // namespace faster
