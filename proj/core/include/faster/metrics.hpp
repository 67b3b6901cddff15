#pragma once
// Evaluation harness: query recall, Tavg, Err@k, ablation suite, and
// the bundled MetricsReport.

#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "faster/matchers.hpp"
#include "faster/pps.hpp"
#include "faster/rules.hpp"

namespace faster {

// Unordered pid pairs, canonical (natural order, smaller first).
using PairSet = std::set<std::pair<std::string, std::string>>;

PairSet make_pair_set(std::span<const std::pair<std::string, std::string>> pairs);

// |found ∩ gt| / |gt|, vacuously 1 when gt is empty.
double query_recall(const PairSet& found, const PairSet& gt);

// Average time per emitted true match; +infinity sentinel when none
// (rendered as null/"n/a" in reports).
double tavg_ms(double total_ms, uint64_t emitted_true_matches);

// The demand-restricted sub-ground-truth M_query: ground-truth
// duplicate pairs that are stage-1 candidates under the query's demand.
PairSet query_truth_pairs(const PropertyGraph& g, const Query& q, const GroundTruth& gt);

// Pairs co-resident in some emitted entity (the entity-level M_emitted).
PairSet emitted_pairs(std::span<const EmittedEntity> emissions);

// (comparisons, recall) points, one per emission, non-decreasing.
std::vector<std::pair<uint64_t, double>>
recall_curve(std::span<const EmittedEntity> emissions, const PairSet& truth);

// Err@k: fraction of the first k emissions that are errors. An emitted
// entity is an error when its aggregate failed the demand (demand_ok
// false) or its members span more than one ground-truth entity. ks
// larger than the emission count are clipped with a warning.
std::map<uint64_t, double> err_at_k(std::span<const EmittedEntity> emissions,
                                    const GroundTruth& gt,
                                    std::span<const uint64_t> ks,
                                    std::ostream* warnings = nullptr);

struct AblationRow {
    std::string mode; // FastER, No-RF, No-B, No-PPS, No-T
    uint64_t comparisons = 0;
    double relative = 0; // vs FastER
    double recall = 0;
};

// Runs the full pipeline and the four component-removal modes with the
// same matcher and reports comparisons relative to the full pipeline.
std::vector<AblationRow> ablation_suite(const PropertyGraph& g, const Query& q,
                                        const Matcher& matcher, const GroundTruth& gt,
                                        const RunConfig& base);

void write_ablation_csv(std::ostream& out, std::span<const AblationRow> rows);

struct MetricsReport {
    double query_recall = 0;
    double tavg_ms = 0; // +inf sentinel when no true match was emitted
    std::map<uint64_t, double> err_at_k;
    uint64_t comparisons = 0;
    std::map<std::string, double> relative_comparisons; // filled by ablate
    std::vector<std::pair<uint64_t, double>> recall_curve;
    SelectivityReport selectivity;
    RunStats stats;

    nlohmann::json to_json() const;
    void write_recall_curve_csv(std::ostream& out) const;
};

// One instrumented pipeline run plus every metric derived from it.
MetricsReport run_bench(const PropertyGraph& g, const Query& q, const Matcher& matcher,
                        const GroundTruth& gt, const RunConfig& cfg,
                        std::span<const uint64_t> ks, std::ostream* warnings = nullptr,
                        const EmitSink& sink = {});

} // namespace faster
