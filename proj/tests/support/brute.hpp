#pragma once
// Independent oracles for the test suites. Everything here is written
// the slow, obvious way and shares no code with the library paths it
// checks: its own edit distance, exhaustive assignment enumeration over
// all |V|^|vars| bindings, and direct constraint evaluation.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "faster/graph.hpp"
#include "faster/rules.hpp"

namespace faster::testing {

size_t brute_edit_distance(const std::string& a, const std::string& b);

// Canonicalized homomorphism bindings (as var-index -> handle vectors),
// computed by filtering every possible assignment.
std::set<std::vector<NodeHandle>> brute_matches(const PropertyGraph& g,
                                                const GraphPattern& q,
                                                const std::vector<DemandPredicate>& demand);

// Canonical candidate pairs (by pid) from the brute matches.
std::set<std::pair<std::string, std::string>>
brute_candidate_pairs(const PropertyGraph& g, const GraphPattern& q,
                      const std::vector<DemandPredicate>& demand);

// Stage-2 survivors: candidate pairs satisfying at least one rule's
// whole lhs on some brute match, with per-pair satisfied rule ids.
std::map<std::pair<std::string, std::string>, std::set<std::string>>
brute_filtered_pairs(const PropertyGraph& g, const Query& q);

} // namespace faster::testing
