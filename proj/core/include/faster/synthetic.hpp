#pragma once
// Seeded generator for user/platform-style graphs with duplicated,
// typo-perturbed user profiles. Output is bit-identical per seed; the
// manifest doubles as the oracle for the generated counts.

#include <cstdint>
#include <string>

#include <json.hpp>

namespace faster {

struct SyntheticConfig {
    size_t n_entities = 100;
    double dup_rate = 0.2;   // fraction of entities that get duplicates
    double attr_noise = 0.3; // per-attribute typo probability on duplicates
    uint64_t seed = 1;
};

struct SyntheticOutput {
    std::string nodes_path, edges_path, gt_path, query_path, manifest_path;
    size_t nodes = 0;
    size_t edges = 0;
    size_t profiles = 0; // user nodes
    size_t duplicate_clusters = 0;
    size_t duplicate_pairs = 0;

    nlohmann::json manifest() const;
};

// Writes nodes.csv, edges.csv, gt.csv, query.json and manifest.json
// under out_dir (created if missing).
SyntheticOutput gen_synthetic(const SyntheticConfig& cfg, const std::string& out_dir);

} // namespace faster
