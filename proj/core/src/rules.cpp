#include "faster/rules.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "faster/errors.hpp"
#include "faster/text_distance.hpp"

namespace faster {

const char* constraint_kind_name(ConstraintKind k) {
    switch (k) {
    case ConstraintKind::attr_const: return "attr_const";
    case ConstraintKind::attr_attr: return "attr_attr";
    case ConstraintKind::eid_const: return "eid_const";
    case ConstraintKind::eid_eid: return "eid_eid";
    case ConstraintKind::rela_const: return "rela_const";
    case ConstraintKind::rela_rela: return "rela_rela";
    }
    return "?";
}

const char* metric_name(Metric m) {
    switch (m) {
    case Metric::edit: return "edit";
    case Metric::absdiff: return "absdiff";
    case Metric::exact: return "exact";
    }
    return "?";
}

const char* agg_mode_name(AggMode m) {
    switch (m) {
    case AggMode::min: return "min";
    case AggMode::max: return "max";
    case AggMode::avg: return "avg";
    case AggMode::vote: return "vote";
    case AggMode::any: return "any";
    }
    return "?";
}

std::optional<AggMode> Query::agg_for(std::string_view attr) const {
    for (const auto& [a, m] : aggregation) {
        if (a == attr) return m;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

void reject_unknown_fields(const nlohmann::json& obj, const std::string& path,
                           std::initializer_list<const char*> allowed) {
    for (auto& [k, v] : obj.items()) {
        (void)v;
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return k == a; }) == allowed.end()) {
            throw SchemaError(path + "." + k, "unknown field");
        }
    }
}

const nlohmann::json& require_field(const nlohmann::json& obj, const char* key,
                                    const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(path + "." + key, "missing field");
    return *it;
}

std::string require_string(const nlohmann::json& j, const std::string& path) {
    if (!j.is_string()) throw SchemaError(path, "expected a string");
    return j.get<std::string>();
}

double require_number(const nlohmann::json& j, const std::string& path) {
    if (!j.is_number()) throw SchemaError(path, "expected a number");
    return j.get<double>();
}

DemandOp parse_demand_op(const std::string& s, const std::string& path) {
    if (s == "<") return DemandOp::lt;
    if (s == "<=") return DemandOp::le;
    if (s == "=" || s == "==") return DemandOp::eq;
    if (s == ">=") return DemandOp::ge;
    if (s == ">") return DemandOp::gt;
    if (s == "contains") return DemandOp::contains;
    throw SchemaError(path, "unknown op \"" + s + "\"");
}

GraphPattern parse_pattern(const nlohmann::json& j) {
    if (!j.is_object()) throw SchemaError("pattern", "expected an object");
    reject_unknown_fields(j, "pattern", {"nodes", "edges", "duplicates"});
    GraphPattern q;
    const auto& nodes = require_field(j, "nodes", "pattern");
    if (!nodes.is_array() || nodes.empty())
        throw SchemaError("pattern.nodes", "expected a non-empty array");
    for (size_t i = 0; i < nodes.size(); ++i) {
        const auto& n = nodes[i];
        std::string path = "pattern.nodes[" + std::to_string(i) + "]";
        if (!n.is_object()) throw SchemaError(path, "expected an object");
        reject_unknown_fields(n, path, {"var", "label"});
        q.nodes.push_back({require_string(require_field(n, "var", path), path + ".var"),
                           require_string(require_field(n, "label", path), path + ".label")});
    }
    if (auto it = j.find("edges"); it != j.end()) {
        if (!it->is_array()) throw SchemaError("pattern.edges", "expected an array");
        for (size_t i = 0; i < it->size(); ++i) {
            const auto& e = (*it)[i];
            std::string path = "pattern.edges[" + std::to_string(i) + "]";
            if (!e.is_object()) throw SchemaError(path, "expected an object");
            reject_unknown_fields(e, path, {"src", "label", "dst"});
            q.edges.push_back({require_string(require_field(e, "src", path), path + ".src"),
                               require_string(require_field(e, "label", path), path + ".label"),
                               require_string(require_field(e, "dst", path), path + ".dst")});
        }
    }
    const auto& dup = require_field(j, "duplicates", "pattern");
    if (!dup.is_array() || dup.size() != 2)
        throw SchemaError("pattern.duplicates", "expected an array of two variables");
    q.duplicates = {require_string(dup[0], "pattern.duplicates[0]"),
                    require_string(dup[1], "pattern.duplicates[1]")};
    return q;
}

DistanceConstraint parse_constraint(const nlohmann::json& j, const std::string& path,
                                    const GraphPattern& pattern) {
    if (!j.is_object()) throw SchemaError(path, "expected an object");
    reject_unknown_fields(j, path, {"kind", "vars", "attrs", "metric", "threshold", "constant"});
    DistanceConstraint c;

    std::string kind = require_string(require_field(j, "kind", path), path + ".kind");
    if (kind == "attr_const") c.kind = ConstraintKind::attr_const;
    else if (kind == "attr_attr") c.kind = ConstraintKind::attr_attr;
    else if (kind == "eid_const") c.kind = ConstraintKind::eid_const;
    else if (kind == "eid_eid") c.kind = ConstraintKind::eid_eid;
    else if (kind == "rela_const") c.kind = ConstraintKind::rela_const;
    else if (kind == "rela_rela") c.kind = ConstraintKind::rela_rela;
    else throw SchemaError(path + ".kind", "unknown kind \"" + kind + "\"");

    const auto& vars = require_field(j, "vars", path);
    if (!vars.is_array() || vars.empty() || vars.size() > 2)
        throw SchemaError(path + ".vars", "expected one or two variables");
    for (size_t i = 0; i < vars.size(); ++i) {
        std::string v = require_string(vars[i], path + ".vars");
        if (pattern.var_index(v) == GraphPattern::npos) throw UndeclaredVariable(v);
        c.vars.push_back(std::move(v));
    }

    if (auto it = j.find("attrs"); it != j.end()) {
        if (!it->is_array() || it->size() > 2)
            throw SchemaError(path + ".attrs", "expected an array of up to two names");
        for (const auto& a : *it) c.attrs.push_back(require_string(a, path + ".attrs"));
    }

    if (auto it = j.find("metric"); it != j.end()) {
        std::string m = require_string(*it, path + ".metric");
        if (m == "edit") c.metric = Metric::edit;
        else if (m == "absdiff") c.metric = Metric::absdiff;
        else if (m == "exact") c.metric = Metric::exact;
        else throw SchemaError(path + ".metric", "unknown metric \"" + m + "\"");
    }

    if (auto it = j.find("threshold"); it != j.end()) {
        c.threshold = require_number(*it, path + ".threshold");
        if (c.threshold < 0 || !std::isfinite(c.threshold))
            throw BadThreshold(path + ".threshold: must be a finite non-negative number");
    }

    if (auto it = j.find("constant"); it != j.end()) {
        if (it->is_null()) throw SchemaError(path + ".constant", "must not be null");
        c.constant = attr_from_json(*it);
    }

    bool pairwise = c.kind == ConstraintKind::attr_attr ||
                    c.kind == ConstraintKind::eid_eid ||
                    c.kind == ConstraintKind::rela_rela;
    if (pairwise && c.vars.size() != 2)
        throw SchemaError(path + ".vars", "pairwise constraint needs two variables");
    if (!pairwise && c.vars.size() != 1)
        throw SchemaError(path + ".vars", "constant constraint needs one variable");

    switch (c.kind) {
    case ConstraintKind::attr_const:
        if (c.attrs.size() != 1)
            throw SchemaError(path + ".attrs", "attr_const names one attribute");
        if (!c.constant) throw SchemaError(path + ".constant", "attr_const needs a constant");
        break;
    case ConstraintKind::attr_attr:
        if (c.attrs.empty() || c.attrs.size() > 2)
            throw SchemaError(path + ".attrs", "attr_attr names one or two attributes");
        if (c.attrs.size() == 1) c.attrs.push_back(c.attrs[0]);
        break;
    case ConstraintKind::eid_const:
        if (!c.constant) throw SchemaError(path + ".constant", "eid_const needs a constant");
        [[fallthrough]];
    case ConstraintKind::eid_eid:
        if (!c.attrs.empty())
            throw SchemaError(path + ".attrs", "eid constraints take no attributes");
        break;
    case ConstraintKind::rela_const:
        if (!c.constant || !c.constant->is_text())
            throw SchemaError(path + ".constant", "rela_const needs a node id constant");
        [[fallthrough]];
    case ConstraintKind::rela_rela:
        if (c.attrs.empty() || c.attrs.size() > 2)
            throw SchemaError(path + ".attrs", "rela constraints name one or two relation labels");
        if (c.attrs.size() == 1) c.attrs.push_back(c.attrs[0]);
        break;
    }

    if (c.kind != ConstraintKind::attr_const && c.kind != ConstraintKind::attr_attr) {
        if (c.threshold != 0)
            throw BadThreshold(path + ".threshold: must be 0 for " + kind);
        if (c.metric != Metric::exact)
            throw SchemaError(path + ".metric", std::string("must be exact for ") + kind);
    }
    return c;
}

} // namespace

Query parse_query(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw SchemaError(path, "not valid JSON");
    return parse_query_json(doc);
}

Query parse_query_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw SchemaError("$", "expected a JSON object");
    reject_unknown_fields(doc, "$", {"pattern", "demand", "rules", "weighting",
                                     "threshold", "aggregation"});
    Query q;
    q.pattern = parse_pattern(require_field(doc, "pattern", "$"));
    q.pattern.validate();

    if (auto it = doc.find("demand"); it != doc.end()) {
        if (!it->is_array()) throw SchemaError("demand", "expected an array");
        for (size_t i = 0; i < it->size(); ++i) {
            const auto& d = (*it)[i];
            std::string path = "demand[" + std::to_string(i) + "]";
            if (!d.is_object()) throw SchemaError(path, "expected an object");
            reject_unknown_fields(d, path, {"var", "attr", "op", "value"});
            DemandPredicate p;
            p.var = require_string(require_field(d, "var", path), path + ".var");
            if (q.pattern.var_index(p.var) == GraphPattern::npos)
                throw UndeclaredVariable(p.var);
            p.attr = require_string(require_field(d, "attr", path), path + ".attr");
            p.op = parse_demand_op(
                require_string(require_field(d, "op", path), path + ".op"), path + ".op");
            const auto& value = require_field(d, "value", path);
            if (value.is_null()) throw SchemaError(path + ".value", "must not be null");
            p.value = attr_from_json(value);
            if (p.op == DemandOp::contains && !p.value.is_text())
                throw SchemaError(path + ".value", "contains requires a text value");
            q.demand.push_back(std::move(p));
        }
    }

    const auto& rules = require_field(doc, "rules", "$");
    if (!rules.is_array() || rules.empty())
        throw SchemaError("rules", "expected a non-empty array");
    std::set<std::string> rule_ids;
    for (size_t i = 0; i < rules.size(); ++i) {
        const auto& r = rules[i];
        std::string path = "rules[" + std::to_string(i) + "]";
        if (!r.is_object()) throw SchemaError(path, "expected an object");
        reject_unknown_fields(r, path, {"id", "lhs", "rhs"});
        GddRule rule;
        rule.id = require_string(require_field(r, "id", path), path + ".id");
        if (!rule_ids.insert(rule.id).second)
            throw SchemaError(path + ".id", "duplicate rule id \"" + rule.id + "\"");
        const auto& lhs = require_field(r, "lhs", path);
        if (!lhs.is_array()) throw SchemaError(path + ".lhs", "expected an array");
        for (size_t k = 0; k < lhs.size(); ++k)
            rule.lhs.push_back(parse_constraint(lhs[k], path + ".lhs[" + std::to_string(k) + "]",
                                                q.pattern));
        const auto& rhs = require_field(r, "rhs", path);
        if (!rhs.is_array() || rhs.empty())
            throw SchemaError(path + ".rhs", "expected a non-empty array");
        for (size_t k = 0; k < rhs.size(); ++k) {
            std::string cpath = path + ".rhs[" + std::to_string(k) + "]";
            DistanceConstraint c = parse_constraint(rhs[k], cpath, q.pattern);
            if (c.kind != ConstraintKind::eid_eid)
                throw SchemaError(cpath, "rhs constraints must be eid_eid");
            rule.rhs.push_back(std::move(c));
        }
        q.rules.push_back(std::move(rule));
    }

    if (auto it = doc.find("weighting"); it != doc.end()) {
        std::string w = require_string(*it, "weighting");
        if (w == "count") q.weighting = Weighting::count;
        else if (w == "arcs") q.weighting = Weighting::arcs;
        else throw SchemaError("weighting", "expected \"count\" or \"arcs\"");
    }
    if (auto it = doc.find("threshold"); it != doc.end()) {
        q.threshold = require_number(*it, "threshold");
        if (q.threshold < 0 || !std::isfinite(q.threshold))
            throw BadThreshold("threshold: must be a finite non-negative number");
    }
    if (auto it = doc.find("aggregation"); it != doc.end()) {
        if (!it->is_object()) throw SchemaError("aggregation", "expected an object");
        for (auto& [attr, mode] : it->items()) {
            std::string m = require_string(mode, "aggregation." + attr);
            AggMode am;
            if (m == "min") am = AggMode::min;
            else if (m == "max") am = AggMode::max;
            else if (m == "avg") am = AggMode::avg;
            else if (m == "vote") am = AggMode::vote;
            else if (m == "any") am = AggMode::any;
            else throw SchemaError("aggregation." + attr, "unknown mode \"" + m + "\"");
            q.aggregation.emplace_back(attr, am);
        }
        std::sort(q.aggregation.begin(), q.aggregation.end());
    }
    return q;
}

nlohmann::json query_to_json(const Query& q) {
    nlohmann::json doc;
    auto& pattern = doc["pattern"];
    pattern["nodes"] = nlohmann::json::array();
    for (const auto& n : q.pattern.nodes)
        pattern["nodes"].push_back({{"var", n.var}, {"label", n.label}});
    pattern["edges"] = nlohmann::json::array();
    for (const auto& e : q.pattern.edges)
        pattern["edges"].push_back({{"src", e.src}, {"label", e.label}, {"dst", e.dst}});
    pattern["duplicates"] = {q.pattern.duplicates.first, q.pattern.duplicates.second};

    doc["demand"] = nlohmann::json::array();
    for (const auto& d : q.demand)
        doc["demand"].push_back({{"var", d.var},
                                 {"attr", d.attr},
                                 {"op", demand_op_name(d.op)},
                                 {"value", attr_to_json(d.value)}});

    doc["rules"] = nlohmann::json::array();
    auto constraint_json = [](const DistanceConstraint& c) {
        nlohmann::json j{{"kind", constraint_kind_name(c.kind)}, {"vars", c.vars}};
        if (!c.attrs.empty()) j["attrs"] = c.attrs;
        j["metric"] = metric_name(c.metric);
        j["threshold"] = c.threshold;
        if (c.constant) j["constant"] = attr_to_json(*c.constant);
        return j;
    };
    for (const auto& r : q.rules) {
        nlohmann::json rj{{"id", r.id}};
        rj["lhs"] = nlohmann::json::array();
        for (const auto& c : r.lhs) rj["lhs"].push_back(constraint_json(c));
        rj["rhs"] = nlohmann::json::array();
        for (const auto& c : r.rhs) rj["rhs"].push_back(constraint_json(c));
        doc["rules"].push_back(std::move(rj));
    }

    doc["weighting"] = q.weighting == Weighting::count ? "count" : "arcs";
    doc["threshold"] = q.threshold;
    doc["aggregation"] = nlohmann::json::object();
    for (const auto& [attr, mode] : q.aggregation)
        doc["aggregation"][attr] = agg_mode_name(mode);
    return doc;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

// metric distance <= threshold, with type mismatches (edit on numbers,
// absdiff on text) unsatisfied and reported via type_mismatch.
bool within_threshold(Metric m, double threshold, const AttrValue& a, const AttrValue& b,
                      bool* type_mismatch) {
    switch (m) {
    case Metric::edit:
        if (a.is_text() && b.is_text())
            return edit_within(a.as_text(), b.as_text(),
                               static_cast<size_t>(threshold));
        if (type_mismatch) *type_mismatch = true;
        return false;
    case Metric::absdiff:
        if (a.is_number() && b.is_number())
            return std::abs(a.as_number() - b.as_number()) <= threshold;
        if (type_mismatch) *type_mismatch = true;
        return false;
    case Metric::exact:
        return a == b; // distance 0 iff equal, unequal has none
    }
    return false;
}

bool has_relation(const PropertyGraph& g, NodeHandle h, const std::string& label,
                  NodeHandle target) {
    auto lid = g.edge_label_id(label);
    if (!lid) return false;
    return g.has_edge(h, *lid, target) || g.has_edge(target, *lid, h);
}

} // namespace

bool eval_constraint(const DistanceConstraint& c, const Match& m,
                     const PropertyGraph& g, bool* type_mismatch) {
    switch (c.kind) {
    case ConstraintKind::attr_const: {
        const AttrValue& v = g.attr_of(m.at(c.vars[0]), c.attrs[0]);
        if (v.is_absent()) return false;
        return within_threshold(c.metric, c.threshold, v, *c.constant, type_mismatch);
    }
    case ConstraintKind::attr_attr: {
        const AttrValue& a = g.attr_of(m.at(c.vars[0]), c.attrs[0]);
        const AttrValue& b = g.attr_of(m.at(c.vars[1]), c.attrs[1]);
        if (a.is_absent() || b.is_absent()) return false;
        return within_threshold(c.metric, c.threshold, a, b, type_mismatch);
    }
    case ConstraintKind::eid_const:
    case ConstraintKind::eid_eid:
        // Entity ids live in the ground-truth side file, not in the
        // dirty graph; as lhs conditions these are never satisfiable.
        return false;
    case ConstraintKind::rela_const: {
        auto target = g.find(c.constant->as_text());
        if (!target) return false;
        return has_relation(g, m.at(c.vars[0]), c.attrs[0], *target);
    }
    case ConstraintKind::rela_rela: {
        NodeHandle x = m.at(c.vars[0]), y = m.at(c.vars[1]);
        auto shared = [&](Direction dir) {
            auto xs = g.neighbors(x, c.attrs[0], dir);
            auto ys = g.neighbors(y, c.attrs[1], dir);
            std::vector<NodeHandle> common;
            std::set_intersection(xs.begin(), xs.end(), ys.begin(), ys.end(),
                                  std::back_inserter(common),
                                  [&](NodeHandle a, NodeHandle b) {
                                      return g.rank_of(a) < g.rank_of(b);
                                  });
            return !common.empty();
        };
        return shared(Direction::both);
    }
    }
    return false;
}

std::vector<FilteredPair> filter_matches(std::span<const Match> matches,
                                         std::span<const GddRule> rules,
                                         const PropertyGraph& g) {
    if (matches.empty()) return {};
    const GraphPattern& q = *matches[0].pattern;
    size_t dx = q.var_index(q.duplicates.first);
    size_t dy = q.var_index(q.duplicates.second);

    // Group matches by canonical pair; a rule may hold on any one of a
    // pair's matches (different y bindings) but counts once.
    std::map<std::pair<uint32_t, uint32_t>, std::vector<const Match*>> by_pair;
    for (const Match& m : matches) {
        uint32_t a = g.rank_of(m.bound[dx]), b = g.rank_of(m.bound[dy]);
        by_pair[{std::min(a, b), std::max(a, b)}].push_back(&m);
    }

    std::vector<FilteredPair> out;
    for (const auto& [ranks, group] : by_pair) {
        FilteredPair fp;
        fp.pair = {g.nodes_natural()[ranks.first], g.nodes_natural()[ranks.second]};
        for (const GddRule& r : rules) {
            bool satisfied = std::any_of(group.begin(), group.end(), [&](const Match* m) {
                return std::all_of(r.lhs.begin(), r.lhs.end(), [&](const DistanceConstraint& c) {
                    return eval_constraint(c, *m, g);
                });
            });
            if (satisfied) fp.rules.push_back(r.id);
        }
        if (!fp.rules.empty()) {
            std::sort(fp.rules.begin(), fp.rules.end());
            out.push_back(std::move(fp));
        }
    }
    return out;
}

SelectivityReport rule_selectivity_report(const Query& q, const PropertyGraph& g) {
    auto matches = enumerate_matches(g, q.pattern, q.demand);
    auto pairs = candidate_pairs(matches, q.pattern, g);

    size_t dx = q.pattern.var_index(q.pattern.duplicates.first);
    size_t dy = q.pattern.var_index(q.pattern.duplicates.second);
    std::map<std::pair<uint32_t, uint32_t>, std::vector<const Match*>> by_pair;
    for (const Match& m : matches) {
        uint32_t a = g.rank_of(m.bound[dx]), b = g.rank_of(m.bound[dy]);
        by_pair[{std::min(a, b), std::max(a, b)}].push_back(&m);
    }

    SelectivityReport rep;
    rep.candidate_pairs = pairs.size();
    std::set<std::pair<uint32_t, uint32_t>> retained_any;
    for (const GddRule& r : q.rules) {
        SelectivityRow row;
        row.rule_id = r.id;
        for (const auto& [ranks, group] : by_pair) {
            bool satisfied = false;
            for (const Match* m : group) {
                bool all = true;
                for (const DistanceConstraint& c : r.lhs) {
                    bool mismatch = false;
                    if (!eval_constraint(c, *m, g, &mismatch)) all = false;
                    if (mismatch) ++row.type_mismatches;
                    if (!all) break;
                }
                if (all) {
                    satisfied = true;
                    break;
                }
            }
            if (satisfied) {
                ++row.retained;
                retained_any.insert(ranks);
            }
        }
        row.beta = rep.candidate_pairs ? static_cast<double>(row.retained) /
                                             static_cast<double>(rep.candidate_pairs)
                                       : 0.0;
        rep.rows.push_back(std::move(row));
    }
    rep.retained_pairs = retained_any.size();
    rep.beta_total = rep.candidate_pairs ? static_cast<double>(rep.retained_pairs) /
                                               static_cast<double>(rep.candidate_pairs)
                                         : 0.0;
    return rep;
}

nlohmann::json SelectivityReport::to_json() const {
    nlohmann::json rows_json = nlohmann::json::array();
    for (const auto& r : rows) {
        rows_json.push_back({{"rule", r.rule_id},
                             {"retained", r.retained},
                             {"beta", r.beta},
                             {"type_mismatches", r.type_mismatches}});
    }
    return {{"candidate_pairs", candidate_pairs},
            {"retained_pairs", retained_pairs},
            {"beta_total", beta_total},
            {"rules", std::move(rows_json)}};
}

} // namespace faster
