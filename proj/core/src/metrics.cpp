#include "faster/metrics.hpp"

#include <algorithm>
#include <limits>

#include "faster/natural_order.hpp"
#include "faster/pattern.hpp"

namespace faster {

PairSet make_pair_set(std::span<const std::pair<std::string, std::string>> pairs) {
    PairSet out;
    for (const auto& [a, b] : pairs) {
        if (natural_less(a, b)) out.emplace(a, b);
        else out.emplace(b, a);
    }
    return out;
}

double query_recall(const PairSet& found, const PairSet& gt) {
    if (gt.empty()) return 1.0;
    size_t hit = 0;
    for (const auto& p : gt) hit += found.count(p);
    return static_cast<double>(hit) / static_cast<double>(gt.size());
}

double tavg_ms(double total_ms, uint64_t emitted_true_matches) {
    if (emitted_true_matches == 0) return std::numeric_limits<double>::infinity();
    return total_ms / static_cast<double>(emitted_true_matches);
}

PairSet query_truth_pairs(const PropertyGraph& g, const Query& q, const GroundTruth& gt) {
    auto matches = enumerate_matches(g, q.pattern, q.demand);
    auto cand = candidate_pairs(matches, q.pattern, g);
    PairSet out;
    for (const auto& [a, b] : cand) {
        const std::string* ea = gt.try_eid(g.id_of(a));
        const std::string* eb = gt.try_eid(g.id_of(b));
        if (ea && eb && *ea == *eb) out.emplace(g.id_of(a), g.id_of(b));
    }
    return out;
}

PairSet emitted_pairs(std::span<const EmittedEntity> emissions) {
    PairSet out;
    for (const EmittedEntity& e : emissions) {
        for (size_t i = 0; i < e.members.size(); ++i) {
            for (size_t j = i + 1; j < e.members.size(); ++j)
                out.emplace(e.members[i], e.members[j]); // members already sorted
        }
    }
    return out;
}

std::vector<std::pair<uint64_t, double>>
recall_curve(std::span<const EmittedEntity> emissions, const PairSet& truth) {
    std::vector<std::pair<uint64_t, double>> curve;
    if (truth.empty()) {
        for (const EmittedEntity& e : emissions) curve.emplace_back(e.emitted_at_comparisons, 1.0);
        return curve;
    }
    PairSet found;
    for (const EmittedEntity& e : emissions) {
        for (size_t i = 0; i < e.members.size(); ++i) {
            for (size_t j = i + 1; j < e.members.size(); ++j) {
                auto p = std::make_pair(e.members[i], e.members[j]);
                if (truth.count(p)) found.insert(p);
            }
        }
        curve.emplace_back(e.emitted_at_comparisons,
                           static_cast<double>(found.size()) /
                               static_cast<double>(truth.size()));
    }
    return curve;
}

std::map<uint64_t, double> err_at_k(std::span<const EmittedEntity> emissions,
                                    const GroundTruth& gt,
                                    std::span<const uint64_t> ks,
                                    std::ostream* warnings) {
    auto is_error = [&](const EmittedEntity& e) {
        if (!e.demand_ok) return true;
        const std::string* eid = nullptr;
        for (const std::string& pid : e.members) {
            const std::string* x = gt.try_eid(pid);
            if (!x) continue; // uncovered members do not decide purity
            if (eid && *x != *eid) return true;
            eid = x;
        }
        return false;
    };

    std::vector<bool> errors;
    errors.reserve(emissions.size());
    for (const EmittedEntity& e : emissions) errors.push_back(is_error(e));

    std::map<uint64_t, double> out;
    for (uint64_t k : ks) {
        uint64_t effective = k;
        if (k > emissions.size()) {
            if (warnings)
                *warnings << "err@k: k=" << k << " exceeds " << emissions.size()
                          << " emissions, clipping\n";
            effective = emissions.size();
        }
        if (effective == 0) {
            out[k] = 0.0;
            continue;
        }
        uint64_t bad = 0;
        for (uint64_t i = 0; i < effective; ++i) bad += errors[i];
        out[k] = static_cast<double>(bad) / static_cast<double>(effective);
    }
    return out;
}

std::vector<AblationRow> ablation_suite(const PropertyGraph& g, const Query& q,
                                        const Matcher& matcher, const GroundTruth& gt,
                                        const RunConfig& base) {
    PairSet truth = query_truth_pairs(g, q, gt);

    auto run_mode = [&](DisableSet dis) {
        RunConfig cfg = base;
        cfg.disable = dis;
        RunStats stats = run_pipeline(g, q, matcher, cfg, {});
        double recall = query_recall(emitted_pairs(stats.emission_log), truth);
        return std::make_pair(stats.comparisons, recall);
    };

    auto [full_comp, full_recall] = run_mode(DisableSet{});
    double denom = full_comp == 0 ? 1.0 : static_cast<double>(full_comp);

    std::vector<AblationRow> rows;
    auto add = [&](const std::string& name, DisableSet dis) {
        auto [comp, recall] = name == "FastER" ? std::make_pair(full_comp, full_recall)
                                               : run_mode(dis);
        rows.push_back({name, comp, static_cast<double>(comp) / denom, recall});
    };
    add("No-RF", DisableSet{.rf = true, .b = true});
    add("No-B", DisableSet{.b = true});
    add("No-PPS", DisableSet{.pps = true});
    add("No-T", DisableSet{.t = true});
    add("FastER", DisableSet{});
    return rows;
}

void write_ablation_csv(std::ostream& out, std::span<const AblationRow> rows) {
    out << "mode,comparisons,relative,recall\n";
    for (const AblationRow& r : rows) {
        out << r.mode << ',' << r.comparisons << ',' << r.relative << ',' << r.recall
            << '\n';
    }
}

nlohmann::json MetricsReport::to_json() const {
    nlohmann::json err = nlohmann::json::object();
    for (const auto& [k, v] : err_at_k) err[std::to_string(k)] = v;
    nlohmann::json rel = nlohmann::json::object();
    for (const auto& [mode, v] : relative_comparisons) rel[mode] = v;
    nlohmann::json curve = nlohmann::json::array();
    for (const auto& [c, r] : recall_curve) curve.push_back({c, r});
    nlohmann::json j{{"query_recall", query_recall},
                     {"comparisons", comparisons},
                     {"err_at_k", std::move(err)},
                     {"recall_curve", std::move(curve)},
                     {"selectivity", selectivity.to_json()},
                     {"stats", stats.to_json()}};
    if (std::isfinite(tavg_ms)) j["tavg_ms"] = tavg_ms;
    else j["tavg_ms"] = nullptr; // "n/a": nothing true was emitted
    if (!relative_comparisons.empty()) j["relative_comparisons"] = std::move(rel);
    return j;
}

void MetricsReport::write_recall_curve_csv(std::ostream& out) const {
    out << "comparisons,recall\n";
    for (const auto& [c, r] : recall_curve) out << c << ',' << r << '\n';
}

MetricsReport run_bench(const PropertyGraph& g, const Query& q, const Matcher& matcher,
                        const GroundTruth& gt, const RunConfig& cfg,
                        std::span<const uint64_t> ks, std::ostream* warnings,
                        const EmitSink& sink) {
    MetricsReport rep;
    rep.stats = run_pipeline(g, q, matcher, cfg, sink);

    PairSet truth = query_truth_pairs(g, q, gt);
    PairSet found = emitted_pairs(rep.stats.emission_log);
    rep.query_recall = faster::query_recall(found, truth);
    rep.comparisons = rep.stats.comparisons;
    rep.recall_curve = recall_curve(rep.stats.emission_log, truth);
    rep.stats.recall_curve = rep.recall_curve;

    uint64_t emitted_true = 0;
    for (const auto& p : found) emitted_true += truth.count(p);
    rep.tavg_ms = faster::tavg_ms(rep.stats.elapsed_ms, emitted_true);

    rep.err_at_k = faster::err_at_k(rep.stats.emission_log, gt, ks, warnings);
    rep.selectivity = rule_selectivity_report(q, g);
    return rep;
}

} // namespace faster
