#include "faster/synthetic.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "faster/csv.hpp"
#include "faster/errors.hpp"
#include "faster/rules.hpp"

namespace faster {

namespace {

const char* kFirstNames[] = {
    "James", "Mary", "Robert", "Patricia", "John", "Jennifer", "Michael",
    "Linda", "David", "Elizabeth", "William", "Barbara", "Richard", "Susan",
    "Joseph", "Jessica", "Thomas", "Sarah", "Charles", "Karen", "Chris",
    "Lisa", "Daniel", "Nancy", "Matthew", "Betty", "Anthony", "Margaret",
    "Mark", "Sandra", "Donald", "Ashley", "Steven", "Kim", "Paul", "Emily",
    "Andrew", "Donna", "Joshua", "Michelle"};

const char* kLastNames[] = {
    "Smith", "Johnson", "Williams", "Brown", "Jones", "Garcia", "Miller",
    "Davis", "Rodriguez", "Martinez", "Hernandez", "Lopez", "Gonzalez",
    "Wilson", "Anderson", "Thomas", "Taylor", "Moore", "Jackson", "Martin",
    "Lee", "Perez", "Thompson", "White", "Harris", "Sanchez", "Clark",
    "Ramirez", "Lewis", "Robinson", "Walker", "Young", "Allen", "King",
    "Wright", "Scott", "Torres", "Nguyen", "Hill", "Flores"};

std::string random_phone(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> digit(0, 9);
    std::string s = "3";
    for (int i = 0; i < 2; ++i) s.push_back(static_cast<char>('0' + digit(rng)));
    s.push_back('-'); // hyphen keeps phones textual
    for (int i = 0; i < 7; ++i) s.push_back(static_cast<char>('0' + digit(rng)));
    return s;
}

// One random edit: substitute, delete, or insert a lowercase letter.
void typo(std::string& s, std::mt19937_64& rng) {
    if (s.empty()) return;
    std::uniform_int_distribution<int> kind(0, 2);
    std::uniform_int_distribution<size_t> pos(0, s.size() - 1);
    std::uniform_int_distribution<int> letter(0, 25);
    char c = static_cast<char>('a' + letter(rng));
    switch (kind(rng)) {
    case 0: s[pos(rng)] = c; break;
    case 1: s.erase(pos(rng), 1); break;
    default: s.insert(pos(rng), 1, c); break;
    }
}

nlohmann::json default_query() {
    nlohmann::json q;
    q["pattern"]["nodes"] = {{{"var", "x"}, {"label", "user"}},
                             {{"var", "x2"}, {"label", "user"}},
                             {{"var", "y"}, {"label", "platform"}}};
    q["pattern"]["edges"] = {{{"src", "x"}, {"label", "watched"}, {"dst", "y"}},
                             {{"src", "x2"}, {"label", "watched"}, {"dst", "y"}}};
    q["pattern"]["duplicates"] = {"x", "x2"};
    q["demand"] = {{{"var", "x"}, {"attr", "Age"}, {"op", ">="}, {"value", 18}},
                   {{"var", "x2"}, {"attr", "Age"}, {"op", ">="}, {"value", 18}}};
    auto rule = [](const char* id, const char* attr, const char* metric, double t) {
        return nlohmann::json{
            {"id", id},
            {"lhs", {{{"kind", "attr_attr"},
                      {"vars", {"x", "x2"}},
                      {"attrs", {attr}},
                      {"metric", metric},
                      {"threshold", t}}}},
            {"rhs", {{{"kind", "eid_eid"}, {"vars", {"x", "x2"}}}}}};
    };
    q["rules"] = {rule("r-ln", "Lastname", "edit", 2),
                  rule("r-fn", "Firstname", "edit", 2),
                  rule("r-ph", "Phone", "edit", 2),
                  rule("r-age", "Age", "absdiff", 1)};
    q["weighting"] = "count";
    q["threshold"] = 2;
    q["aggregation"] = {{"Age", "min"},
                        {"Firstname", "vote"},
                        {"Lastname", "vote"},
                        {"Phone", "vote"}};
    return q;
}

} // namespace

nlohmann::json SyntheticOutput::manifest() const {
    return {{"nodes", nodes},
            {"edges", edges},
            {"profiles", profiles},
            {"duplicate_clusters", duplicate_clusters},
            {"duplicate_pairs", duplicate_pairs}};
}

SyntheticOutput gen_synthetic(const SyntheticConfig& cfg, const std::string& out_dir) {
    if (cfg.n_entities == 0) throw Error("n_entities must be positive");
    if (cfg.dup_rate < 0 || cfg.dup_rate > 1) throw Error("dup_rate must be in [0,1]");
    if (cfg.attr_noise < 0 || cfg.attr_noise > 1) throw Error("attr_noise must be in [0,1]");

    std::filesystem::create_directories(out_dir);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> age_dist(19, 78);

    const size_t n_platforms = std::max<size_t>(2, cfg.n_entities / 50);

    struct Profile {
        std::string pid, eid, first, last, phone;
        int age;
        std::vector<size_t> platforms;
    };
    std::vector<Profile> profiles;

    SyntheticOutput out;
    out.nodes_path = out_dir + "/nodes.csv";
    out.edges_path = out_dir + "/edges.csv";
    out.gt_path = out_dir + "/gt.csv";
    out.query_path = out_dir + "/query.json";
    out.manifest_path = out_dir + "/manifest.json";

    for (size_t i = 0; i < cfg.n_entities; ++i) {
        Profile primary;
        primary.pid = "p" + std::to_string(i);
        primary.eid = "e" + std::to_string(i);
        primary.first = kFirstNames[rng() % std::size(kFirstNames)];
        primary.last = kLastNames[rng() % std::size(kLastNames)];
        primary.phone = random_phone(rng);
        primary.age = age_dist(rng);
        size_t watch_count = 1 + rng() % 3;
        std::set<size_t> watched;
        while (watched.size() < std::min(watch_count, n_platforms))
            watched.insert(rng() % n_platforms);
        primary.platforms.assign(watched.begin(), watched.end());

        size_t dups = 0;
        if (coin(rng) < cfg.dup_rate) dups = coin(rng) < 0.25 ? 2 : 1;
        if (dups > 0) {
            ++out.duplicate_clusters;
            out.duplicate_pairs += dups * (dups + 1) / 2; // C(dups+1, 2)
        }

        profiles.push_back(primary);
        for (size_t d = 0; d < dups; ++d) {
            Profile dup = primary;
            dup.pid = primary.pid + "_d" + std::to_string(d);
            for (std::string* field : {&dup.first, &dup.last, &dup.phone}) {
                if (coin(rng) < cfg.attr_noise) typo(*field, rng);
                if (coin(rng) < cfg.attr_noise / 2) typo(*field, rng);
            }
            if (coin(rng) < cfg.attr_noise / 2) dup.age += coin(rng) < 0.5 ? -1 : 1;
            // Keep a shared platform so the pair is pattern-reachable.
            std::vector<size_t> subset;
            for (size_t p : primary.platforms) {
                if (coin(rng) < 0.8) subset.push_back(p);
            }
            if (subset.empty()) subset.push_back(primary.platforms[0]);
            if (coin(rng) < 0.2) {
                size_t extra = rng() % n_platforms;
                if (std::find(subset.begin(), subset.end(), extra) == subset.end())
                    subset.push_back(extra);
            }
            dup.platforms = std::move(subset);
            profiles.push_back(dup);
        }
    }

    {
        std::ofstream nodes(out.nodes_path, std::ios::binary);
        if (!nodes) throw Error("cannot write file: " + out.nodes_path);
        write_csv_record(nodes, std::array<std::string, 3>{"id", "label", "attrs"});
        for (const Profile& p : profiles) {
            nlohmann::json attrs{{"Firstname", p.first},
                                 {"Lastname", p.last},
                                 {"Phone", p.phone},
                                 {"Age", p.age}};
            write_csv_record(nodes, std::array<std::string, 3>{p.pid, "user", attrs.dump()});
            ++out.nodes;
        }
        for (size_t k = 0; k < n_platforms; ++k) {
            nlohmann::json attrs{{"Name", "platform-" + std::to_string(k)}};
            write_csv_record(nodes, std::array<std::string, 3>{"plat" + std::to_string(k),
                                                               "platform", attrs.dump()});
            ++out.nodes;
        }
    }
    {
        std::ofstream edges(out.edges_path, std::ios::binary);
        if (!edges) throw Error("cannot write file: " + out.edges_path);
        write_csv_record(edges, std::array<std::string, 3>{"src", "label", "dst"});
        for (const Profile& p : profiles) {
            for (size_t k : p.platforms) {
                write_csv_record(edges, std::array<std::string, 3>{
                                            p.pid, "watched", "plat" + std::to_string(k)});
                ++out.edges;
            }
        }
    }
    {
        std::ofstream gt(out.gt_path, std::ios::binary);
        if (!gt) throw Error("cannot write file: " + out.gt_path);
        write_csv_record(gt, std::array<std::string, 2>{"pid", "eid"});
        for (const Profile& p : profiles)
            write_csv_record(gt, std::array<std::string, 2>{p.pid, p.eid});
    }
    {
        std::ofstream query(out.query_path, std::ios::binary);
        if (!query) throw Error("cannot write file: " + out.query_path);
        query << default_query().dump(2) << '\n';
    }

    out.profiles = profiles.size();
    {
        std::ofstream manifest(out.manifest_path, std::ios::binary);
        if (!manifest) throw Error("cannot write file: " + out.manifest_path);
        nlohmann::json m = out.manifest();
        m["seed"] = cfg.seed;
        m["n_entities"] = cfg.n_entities;
        m["dup_rate"] = cfg.dup_rate;
        m["attr_noise"] = cfg.attr_noise;
        m["platforms"] = n_platforms;
        manifest << m.dump(2) << '\n';
    }
    return out;
}

} // namespace faster
