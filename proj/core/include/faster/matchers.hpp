#pragma once
// Matcher-agnostic comparison interface. The pipeline only ever sees a
// Matcher callable; what decides a match is injected by name at the CLI.

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "faster/graph.hpp"

namespace faster {

struct MatchDecision {
    bool is_match = false;
    std::optional<double> score; // in [0,1] when present
};

// pid -> eid map loaded from the ground-truth CSV. Total over whatever
// the oracle is queried with; anything else raises MissingGroundTruth.
class GroundTruth {
public:
    static GroundTruth load(const std::string& path);
    static GroundTruth from_rows(std::vector<GroundTruthRow> rows);

    const std::string& eid_of(const std::string& pid) const; // throws
    const std::string* try_eid(const std::string& pid) const;
    bool covers(const std::string& pid) const { return try_eid(pid) != nullptr; }
    size_t size() const { return map_.size(); }

    // All unordered duplicate pairs (equal eid), canonical, sorted.
    std::vector<std::pair<std::string, std::string>> duplicate_pairs() const;

private:
    std::unordered_map<std::string, std::string> map_;
};

using Matcher = std::function<MatchDecision(const EntityProfile&, const EntityProfile&)>;

MatchDecision oracle_match(const EntityProfile& a, const EntityProfile& b,
                           const GroundTruth& gt);

// Mean per-attribute similarity: 1 - edit/maxlen on text, equality on
// numbers, 0 for absent or mixed types. Match iff score >= tau.
MatchDecision similarity_match(const EntityProfile& a, const EntityProfile& b,
                               const std::vector<std::string>& attrs, double tau);

// The returned closures keep a reference; the ground truth (or attr
// list) must outlive the matcher.
Matcher make_oracle_matcher(const GroundTruth& gt);
Matcher make_similarity_matcher(std::vector<std::string> attrs, double tau);

} // namespace faster
