#include "faster/pps.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <set>

#include "faster/errors.hpp"
#include "faster/natural_order.hpp"
#include "faster/pattern.hpp"

namespace faster {

DisableSet DisableSet::parse(const std::string& csv) {
    DisableSet d;
    size_t start = 0;
    while (start <= csv.size()) {
        size_t end = csv.find(',', start);
        if (end == std::string::npos) end = csv.size();
        std::string tok = csv.substr(start, end - start);
        std::erase_if(tok, [](unsigned char c) { return std::isspace(c); });
        std::transform(tok.begin(), tok.end(), tok.begin(),
                       [](unsigned char c) { return std::toupper(c); });
        if (tok == "RF") d.rf = true;
        else if (tok == "B") d.b = true;
        else if (tok == "PPS") d.pps = true;
        else if (tok == "T") d.t = true;
        else if (!tok.empty())
            throw SchemaError("disable", "unknown component \"" + tok + "\"");
        if (end == csv.size()) break;
        start = end + 1;
    }
    return d;
}

std::string DisableSet::to_string() const {
    std::string s;
    auto add = [&](const char* name) {
        if (!s.empty()) s.push_back(',');
        s += name;
    };
    if (rf) add("RF");
    if (b) add("B");
    if (pps) add("PPS");
    if (t) add("T");
    return s;
}

void ClusterSet::ensure(NodeHandle v) {
    if (parent_.emplace(v, v).second) {
        members_[v] = {v};
        ++clusters_;
    }
}

NodeHandle ClusterSet::find(NodeHandle v) {
    ensure(v);
    NodeHandle root = v;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[v] != root) {
        NodeHandle next = parent_[v];
        parent_[v] = root;
        v = next;
    }
    return root;
}

bool ClusterSet::same(NodeHandle a, NodeHandle b) { return find(a) == find(b); }

bool ClusterSet::unite(NodeHandle a, NodeHandle b) {
    NodeHandle ra = find(a), rb = find(b);
    if (ra == rb) return false;
    if (members_[ra].size() < members_[rb].size()) std::swap(ra, rb);
    auto& big = members_[ra];
    auto& small = members_[rb];
    big.insert(big.end(), small.begin(), small.end());
    members_.erase(rb);
    parent_[rb] = ra;
    --clusters_;
    return true;
}

const std::vector<NodeHandle>& ClusterSet::members(NodeHandle v) {
    return members_[find(v)];
}

std::vector<std::pair<std::string, AttrValue>>
aggregate_view(const PropertyGraph& g, std::span<const NodeHandle> members,
               const Query& q) {
    std::map<std::string, std::vector<const AttrValue*>> by_attr;
    for (NodeHandle h : members) {
        for (const auto& [k, v] : g.attrs_of(h)) by_attr[k].push_back(&v);
    }

    std::vector<std::pair<std::string, AttrValue>> view;
    for (auto& [attr, values] : by_attr) {
        AggMode mode = q.agg_for(attr).value_or(AggMode::vote);
        AttrValue folded;
        switch (mode) {
        case AggMode::min:
        case AggMode::max:
        case AggMode::avg: {
            double acc = 0;
            size_t n = 0;
            for (const AttrValue* v : values) {
                if (!v->is_number()) continue; // non-numeric ignored
                double d = v->as_number();
                if (n == 0) acc = d;
                else if (mode == AggMode::min) acc = std::min(acc, d);
                else if (mode == AggMode::max) acc = std::max(acc, d);
                else acc += d;
                ++n;
            }
            if (n == 0) continue;
            folded = AttrValue::number(mode == AggMode::avg ? acc / static_cast<double>(n) : acc);
            break;
        }
        case AggMode::vote: {
            std::sort(values.begin(), values.end(),
                      [](const AttrValue* a, const AttrValue* b) {
                          return a->canonical_less(*b);
                      });
            const AttrValue* best = nullptr;
            size_t best_count = 0;
            for (size_t i = 0; i < values.size();) {
                size_t j = i;
                while (j < values.size() && *values[j] == *values[i]) ++j;
                // Strict > keeps the canonically smallest value on ties.
                if (j - i > best_count) {
                    best = values[i];
                    best_count = j - i;
                }
                i = j;
            }
            folded = *best;
            break;
        }
        case AggMode::any: {
            const AttrValue* best = values[0];
            for (const AttrValue* v : values) {
                if (v->canonical_less(*best)) best = v;
            }
            folded = *best;
            break;
        }
        }
        view.emplace_back(attr, std::move(folded));
    }
    return view;
}

bool demand_ok_on_view(const std::vector<std::pair<std::string, AttrValue>>& view,
                       std::span<const DemandPredicate> demand) {
    for (const DemandPredicate& p : demand) {
        auto it = std::lower_bound(view.begin(), view.end(), p.attr,
                                   [](const auto& kv, const std::string& a) {
                                       return kv.first < a;
                                   });
        if (it == view.end() || it->first != p.attr) return false;
        if (!demand_holds(p, it->second)) return false;
    }
    return true;
}

nlohmann::json EmittedEntity::to_json() const {
    return {{"members", members},
            {"comparisons", emitted_at_comparisons},
            {"elapsed_ms", elapsed_ms},
            {"demand_ok", demand_ok}};
}

nlohmann::json RunStats::to_json() const {
    nlohmann::json log = nlohmann::json::array();
    for (const auto& e : emission_log) log.push_back(e.to_json());
    nlohmann::json curve = nlohmann::json::array();
    for (const auto& [c, r] : recall_curve) curve.push_back({c, r});
    nlohmann::json confirmed = nlohmann::json::array();
    for (const auto& [a, b] : confirmed_pairs) confirmed.push_back({a, b});
    return {{"comparisons", comparisons},
            {"pruned_pairs", pruned_pairs},
            {"transitivity_skips", transitivity_skips},
            {"matches_confirmed", matches_confirmed},
            {"emissions", emissions},
            {"h1_matches", h1_matches},
            {"candidate_pairs", candidate_pair_count},
            {"filtered_pairs", filtered_pair_count},
            {"blocking", {{"nodes", blocking_nodes},
                          {"edges", blocking_edges},
                          {"blocks", blocks}}},
            {"profiles_scheduled", profiles_scheduled},
            {"avg_candidates_per_profile", avg_candidates_per_profile},
            {"elapsed_ms", elapsed_ms},
            {"budget_exhausted", budget_exhausted},
            {"confirmed_pairs", std::move(confirmed)},
            {"emission_log", std::move(log)},
            {"recall_curve", std::move(curve)}};
}

namespace {

struct Scheduler {
    const PropertyGraph& g;
    const Query& q;
    const Matcher& matcher;
    const RunConfig& cfg;
    const EmitSink& sink;
    DisableSet dis;
    double threshold;
    std::chrono::steady_clock::time_point t0;

    RunStats stats;
    ClusterSet clusters;
    std::set<std::pair<uint32_t, uint32_t>> visited, pruned;
    std::unordered_map<NodeHandle, EntityProfile> profile_cache;
    bool stop = false;

    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    }

    const EntityProfile& profile(NodeHandle h) {
        auto it = profile_cache.find(h);
        if (it == profile_cache.end())
            it = profile_cache.emplace(h, g.profile_of(h)).first;
        return it->second;
    }

    std::pair<uint32_t, uint32_t> key(NodeHandle a, NodeHandle b) const {
        uint32_t ra = g.rank_of(a), rb = g.rank_of(b);
        return {std::min(ra, rb), std::max(ra, rb)};
    }

    void try_emit(NodeHandle any_member) {
        NodeHandle root = clusters.find(any_member);
        std::vector<NodeHandle> members = clusters.members(root);
        if (members.size() < 2) return;
        std::sort(members.begin(), members.end(), [&](NodeHandle a, NodeHandle b) {
            return g.rank_of(a) < g.rank_of(b);
        });
        auto view = aggregate_view(g, members, q);
        bool ok = demand_ok_on_view(view, q.demand);
        if (cfg.validate_demand && !ok) return; // cluster may qualify after growth

        EmittedEntity e;
        e.members.reserve(members.size());
        for (NodeHandle h : members) e.members.push_back(g.id_of(h));
        e.emitted_at_comparisons = stats.comparisons;
        e.demand_ok = ok;
        e.elapsed_ms = elapsed_ms();
        ++stats.emissions;
        stats.emission_log.push_back(e);
        if (sink) sink(e);
        if (cfg.max_results && stats.emissions >= *cfg.max_results) {
            stop = true;
            stats.budget_exhausted = true;
        }
    }

    // One candidate pair. `weight` present only on the PPS path, where
    // threshold pruning applies.
    void process(NodeHandle a, NodeHandle b, std::optional<double> weight) {
        auto k = key(a, b);
        if (visited.count(k)) return;
        if (weight && !weight_meets_threshold(*weight, threshold, q.weighting)) {
            if (pruned.insert(k).second) ++stats.pruned_pairs;
            return;
        }
        if (!dis.t && clusters.same(a, b)) {
            ++stats.transitivity_skips;
            return;
        }
        visited.insert(k);

        MatchDecision decision;
        try {
            decision = matcher(profile(a), profile(b));
        } catch (const MatcherFailure&) {
            throw;
        } catch (const std::exception& ex) {
            throw MatcherFailure(g.id_of(a), g.id_of(b), ex.what());
        }
        ++stats.comparisons;

        if (decision.is_match) {
            ++stats.matches_confirmed;
            const std::string &ia = g.id_of(a), &ib = g.id_of(b);
            if (natural_less(ia, ib)) stats.confirmed_pairs.emplace_back(ia, ib);
            else stats.confirmed_pairs.emplace_back(ib, ia);
            if (clusters.unite(a, b)) try_emit(a);
        }
        if (cfg.max_comparisons && stats.comparisons >= *cfg.max_comparisons) {
            stop = true;
            stats.budget_exhausted = true;
        }
    }
};

} // namespace

RunStats run_pipeline(const PropertyGraph& g, const Query& q, const Matcher& matcher,
                      const RunConfig& cfg, const EmitSink& sink) {
    Scheduler s{g, q, matcher, cfg, sink,
                cfg.disable, cfg.threshold.value_or(q.threshold),
                std::chrono::steady_clock::now(), {}, {}, {}, {}, {}, false};
    if (s.dis.rf) s.dis.b = true; // blocking relies on rule filtering

    // Stage 1: pattern filtering under the query demand.
    auto matches = enumerate_matches(g, q.pattern, q.demand);
    s.stats.h1_matches = matches.size();
    auto cand = candidate_pairs(matches, q.pattern, g);
    s.stats.candidate_pair_count = cand.size();

    // Stage 2: constraint filtering (skipped under No-RF, where every
    // stage-1 pair enters with uniform weight 1 and threshold <= 1).
    std::vector<FilteredPair> filtered;
    if (s.dis.rf) {
        filtered.reserve(cand.size());
        for (const auto& p : cand) filtered.push_back({p, {"*"}});
        s.threshold = std::min(s.threshold, 1.0);
    } else {
        filtered = filter_matches(matches, q.rules, g);
    }
    s.stats.filtered_pair_count = filtered.size();

    // Stage 3: blocking graph.
    BlockingGraph bg = build_blocking_graph(g, filtered, q.weighting);
    s.stats.blocking_nodes = bg.nodes().size();
    s.stats.blocking_edges = bg.edge_count();
    s.stats.blocks = bg.block_count();
    if (cfg.blocking_csv_path) {
        std::ofstream out(*cfg.blocking_csv_path, std::ios::binary);
        if (!out) throw Error("cannot write file: " + *cfg.blocking_csv_path);
        bg.dump_csv(out);
    }

    if (s.dis.pps) {
        // Pair-at-a-time in input order; no sorting, no pruning.
        s.stats.profiles_scheduled = bg.nodes().size();
        for (const FilteredPair& fp : filtered) {
            if (s.stop) break;
            s.process(fp.pair.first, fp.pair.second, std::nullopt);
        }
    } else if (s.dis.b) {
        // Profile-by-profile in natural order, partners in natural
        // order; weights and threshold ignored.
        for (NodeHandle v : bg.nodes()) {
            if (s.stop) break;
            ++s.stats.profiles_scheduled;
            auto cands = bg.candidates_of(v);
            std::sort(cands.begin(), cands.end(), [&](const auto& a, const auto& b) {
                return g.rank_of(a.first) < g.rank_of(b.first);
            });
            for (const auto& [u, w] : cands) {
                (void)w;
                if (s.stop) break;
                s.process(v, u, std::nullopt);
            }
        }
    } else {
        // Full PPS: highest average edge weight first, candidates
        // heaviest first, sub-threshold pairs pruned.
        auto order = sorted_profiles(bg);
        for (const SortedProfileEntry& entry : order) {
            if (s.stop) break;
            ++s.stats.profiles_scheduled;
            for (const auto& [u, w] : bg.candidates_of(entry.pid)) {
                if (s.stop) break;
                s.process(entry.pid, u, w);
            }
        }
    }

    std::sort(s.stats.confirmed_pairs.begin(), s.stats.confirmed_pairs.end(),
              [](const auto& a, const auto& b) {
                  if (int c = natural_compare(a.first, b.first); c != 0) return c < 0;
                  return natural_less(a.second, b.second);
              });
    s.stats.avg_candidates_per_profile =
        s.stats.profiles_scheduled == 0
            ? 0.0
            : static_cast<double>(s.stats.comparisons) /
                  static_cast<double>(s.stats.profiles_scheduled);
    s.stats.elapsed_ms = s.elapsed_ms();
    return std::move(s.stats);
}

} // namespace faster
