#pragma once

#include <string>
#include <vector>

#include "faster/attr_value.hpp"
#include "faster/graph.hpp"

namespace faster {

enum class DemandOp { lt, le, eq, ge, gt, contains };

const char* demand_op_name(DemandOp op);

// A selection predicate on one pattern variable, e.g. Age > 18 on x.
// Evaluated per node during enumeration and re-verified against the
// aggregated view before a cluster is emitted.
struct DemandPredicate {
    std::string var;
    std::string attr;
    DemandOp op;
    AttrValue value;
};

// Absent or type-mismatched attribute values never satisfy a predicate.
// Relational ops compare numbers numerically and text lexicographically;
// `contains` is substring search on text.
bool demand_holds(const DemandPredicate& p, const AttrValue& v);

inline bool demand_holds_on_node(const DemandPredicate& p, const PropertyGraph& g,
                                 NodeHandle h) {
    return demand_holds(p, g.attr_of(h, p.attr));
}

} // namespace faster
