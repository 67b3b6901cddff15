#include "faster/matchers.hpp"

#include <algorithm>
#include <map>

#include "faster/errors.hpp"
#include "faster/natural_order.hpp"
#include "faster/text_distance.hpp"

namespace faster {

size_t edit_distance(std::string_view a, std::string_view b) {
    if (a.size() < b.size()) std::swap(a, b);
    std::vector<size_t> row(b.size() + 1);
    for (size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (size_t i = 1; i <= a.size(); ++i) {
        size_t diag = row[0];
        row[0] = i;
        for (size_t j = 1; j <= b.size(); ++j) {
            size_t next = std::min({row[j] + 1, row[j - 1] + 1,
                                    diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = row[j];
            row[j] = next;
        }
    }
    return row[b.size()];
}

bool edit_within(std::string_view a, std::string_view b, size_t limit) {
    if (a.size() < b.size()) std::swap(a, b);
    if (a.size() - b.size() > limit) return false;
    std::vector<size_t> row(b.size() + 1);
    for (size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (size_t i = 1; i <= a.size(); ++i) {
        size_t diag = row[0];
        row[0] = i;
        size_t best = row[0];
        for (size_t j = 1; j <= b.size(); ++j) {
            size_t next = std::min({row[j] + 1, row[j - 1] + 1,
                                    diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = row[j];
            row[j] = next;
            best = std::min(best, next);
        }
        if (best > limit) return false; // the row minimum can only grow
    }
    return row[b.size()] <= limit;
}

GroundTruth GroundTruth::load(const std::string& path) {
    return from_rows(load_ground_truth_rows(path));
}

GroundTruth GroundTruth::from_rows(std::vector<GroundTruthRow> rows) {
    GroundTruth gt;
    for (auto& r : rows) gt.map_[std::move(r.pid)] = std::move(r.eid);
    return gt;
}

const std::string* GroundTruth::try_eid(const std::string& pid) const {
    auto it = map_.find(pid);
    return it == map_.end() ? nullptr : &it->second;
}

const std::string& GroundTruth::eid_of(const std::string& pid) const {
    if (const std::string* e = try_eid(pid)) return *e;
    throw MissingGroundTruth(pid);
}

std::vector<std::pair<std::string, std::string>> GroundTruth::duplicate_pairs() const {
    std::map<std::string, std::vector<std::string>> by_eid;
    for (const auto& [pid, eid] : map_) by_eid[eid].push_back(pid);
    std::vector<std::pair<std::string, std::string>> out;
    for (auto& [eid, pids] : by_eid) {
        (void)eid;
        std::sort(pids.begin(), pids.end(),
                  [](const std::string& a, const std::string& b) { return natural_less(a, b); });
        for (size_t i = 0; i < pids.size(); ++i) {
            for (size_t j = i + 1; j < pids.size(); ++j) out.emplace_back(pids[i], pids[j]);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (int c = natural_compare(a.first, b.first); c != 0) return c < 0;
        return natural_less(a.second, b.second);
    });
    return out;
}

MatchDecision oracle_match(const EntityProfile& a, const EntityProfile& b,
                           const GroundTruth& gt) {
    bool same = gt.eid_of(a.pid) == gt.eid_of(b.pid);
    return {same, same ? 1.0 : 0.0};
}

MatchDecision similarity_match(const EntityProfile& a, const EntityProfile& b,
                               const std::vector<std::string>& attrs, double tau) {
    auto value_of = [](const EntityProfile& p, const std::string& name) -> const AttrValue* {
        auto it = std::lower_bound(p.attrs.begin(), p.attrs.end(), name,
                                   [](const auto& kv, const std::string& n) {
                                       return kv.first < n;
                                   });
        if (it != p.attrs.end() && it->first == name) return &it->second;
        return nullptr;
    };

    double total = 0;
    for (const std::string& name : attrs) {
        const AttrValue* va = value_of(a, name);
        const AttrValue* vb = value_of(b, name);
        if (!va || !vb) continue; // contributes 0
        if (va->is_text() && vb->is_text()) {
            size_t max_len = std::max(va->as_text().size(), vb->as_text().size());
            if (max_len == 0) {
                total += 1.0; // two empty strings are identical
            } else {
                size_t d = edit_distance(va->as_text(), vb->as_text());
                total += 1.0 - static_cast<double>(d) / static_cast<double>(max_len);
            }
        } else if (va->is_number() && vb->is_number()) {
            total += va->as_number() == vb->as_number() ? 1.0 : 0.0;
        }
    }
    double score = attrs.empty() ? 0.0 : total / static_cast<double>(attrs.size());
    return {score >= tau, score};
}

Matcher make_oracle_matcher(const GroundTruth& gt) {
    return [&gt](const EntityProfile& a, const EntityProfile& b) {
        return oracle_match(a, b, gt);
    };
}

Matcher make_similarity_matcher(std::vector<std::string> attrs, double tau) {
    return [attrs = std::move(attrs), tau](const EntityProfile& a, const EntityProfile& b) {
        return similarity_match(a, b, attrs, tau);
    };
}

} // namespace faster
