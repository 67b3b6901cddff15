#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "faster/metrics.hpp"
#include "faster/synthetic.hpp"
#include "support/paths.hpp"

using namespace faster;
using faster::testing::fixture;

namespace {

struct Fig2 {
    PropertyGraph g;
    Query q;
    GroundTruth gt;

    Fig2()
        : g(PropertyGraph::load(fixture("fig2/nodes.csv"), fixture("fig2/edges.csv"))),
          q(parse_query(fixture("fig2/query.json"))),
          gt(GroundTruth::load(fixture("fig2/gt.csv"))) {}
};

std::string temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / name;
    std::filesystem::create_directories(p);
    return p.string();
}

} // namespace

TEST_CASE("query_recall is a plain ratio with a vacuous empty case") {
    PairSet gt{{"a", "b"}, {"c", "d"}, {"e", "f"}, {"g", "h"}, {"i", "j"},
               {"k", "l"}, {"m", "n"}, {"o", "p"}, {"q", "r"}, {"s", "t"}};
    CHECK(query_recall(gt, gt) == 1.0);
    PairSet eight(gt.begin(), std::next(gt.begin(), 8));
    CHECK(query_recall(eight, gt) == doctest::Approx(0.8));
    CHECK(query_recall({}, {}) == 1.0);
    CHECK(query_recall(gt, {}) == 1.0);
}

TEST_CASE("tavg divides or reports the infinity sentinel") {
    CHECK(tavg_ms(1000.0, 10) == doctest::Approx(100.0));
    CHECK(tavg_ms(553.0, 1) == doctest::Approx(553.0));
    CHECK(std::isinf(tavg_ms(5.0, 0)));
}

TEST_CASE("query truth restricts ground truth to demand candidates") {
    Fig2 f;
    PairSet truth = query_truth_pairs(f.g, f.q, f.gt);
    CHECK(truth.size() == 6); // all quad pairs survive stage 1
    CHECK(truth.count({"v3", "v4"}) == 1);
    CHECK(truth.count({"v2", "v5"}) == 0); // not duplicates

    // an impossible demand empties the truth set
    Query q2 = f.q;
    q2.demand.push_back({"x", "Age", DemandOp::gt, AttrValue::number(1000)});
    CHECK(query_truth_pairs(f.g, q2, f.gt).empty());
}

TEST_CASE("err@k counts demand violations in the emission prefix") {
    GroundTruth gt = GroundTruth::from_rows(
        {{"a", "e1"}, {"b", "e1"}, {"c", "e2"}, {"d", "e2"}});
    EmittedEntity good{{"a", "b"}, 2, true, 1.0};
    EmittedEntity bad{{"c", "d"}, 4, false, 2.0};
    std::vector<EmittedEntity> emissions{good, bad};
    std::vector<uint64_t> ks{1, 2, 10};
    std::ostringstream warn;
    auto err = err_at_k(emissions, gt, ks, &warn);
    CHECK(err[1] == 0.0);
    CHECK(err[2] == doctest::Approx(0.5));
    CHECK(err[10] == doctest::Approx(0.5)); // clipped to 2 emissions
    CHECK(warn.str().find("clipping") != std::string::npos);

    SUBCASE("a gt-impure cluster is an error even when demand passes") {
        EmittedEntity mixed{{"a", "c"}, 5, true, 3.0};
        std::vector<EmittedEntity> ems{mixed};
        std::vector<uint64_t> one{1};
        CHECK(err_at_k(ems, gt, one, nullptr)[1] == 1.0);
    }
    SUBCASE("all-valid prefix scores zero") {
        std::vector<EmittedEntity> ems{good, good};
        std::vector<uint64_t> two{2};
        CHECK(err_at_k(ems, gt, two, nullptr)[2] == 0.0);
    }
}

TEST_CASE("err@k on the crafted fixture flips with demand validation") {
    PropertyGraph g = PropertyGraph::load(fixture("errk/nodes.csv"),
                                          fixture("errk/edges.csv"));
    Query q = parse_query(fixture("errk/query.json"));
    GroundTruth gt = GroundTruth::load(fixture("errk/gt.csv"));
    Matcher oracle = make_oracle_matcher(gt);
    std::vector<uint64_t> ks{1, 2};

    RunConfig off;
    off.validate_demand = false;
    RunStats leaky = run_pipeline(g, q, oracle, off, {});
    auto err_off = err_at_k(leaky.emission_log, gt, ks, nullptr);
    bool any_positive = false;
    for (auto& [k, e] : err_off) any_positive |= e > 0.0;
    CHECK(any_positive);

    RunConfig on;
    RunStats strict = run_pipeline(g, q, oracle, on, {});
    auto err_on = err_at_k(strict.emission_log, gt, ks, nullptr);
    for (auto& [k, e] : err_on) CHECK(e == 0.0);
}

TEST_CASE("recall curve is monotone and ends at the run's recall") {
    Fig2 f;
    Matcher oracle = make_oracle_matcher(f.gt);
    RunConfig cfg;
    cfg.threshold = 0.0;
    RunStats stats = run_pipeline(f.g, f.q, oracle, cfg, {});
    PairSet truth = query_truth_pairs(f.g, f.q, f.gt);
    auto curve = recall_curve(stats.emission_log, truth);
    REQUIRE(!curve.empty());
    for (size_t i = 1; i < curve.size(); ++i) {
        CHECK(curve[i].second >= curve[i - 1].second);
        CHECK(curve[i].first >= curve[i - 1].first);
    }
    CHECK(curve.back().second ==
          doctest::Approx(query_recall(emitted_pairs(stats.emission_log), truth)));
    CHECK(curve.back().second == doctest::Approx(1.0)); // threshold 0 finds the quad
}

TEST_CASE("run_bench assembles a full report") {
    Fig2 f;
    Matcher oracle = make_oracle_matcher(f.gt);
    RunConfig cfg;
    std::vector<uint64_t> ks{1, 2};
    MetricsReport rep = run_bench(f.g, f.q, oracle, f.gt, cfg, ks);
    CHECK(rep.query_recall == doctest::Approx(1.0)); // quad found via weight-2 edges
    CHECK(rep.comparisons == 3);
    CHECK(rep.err_at_k.at(1) == 0.0);
    CHECK(std::isfinite(rep.tavg_ms));
    CHECK(rep.selectivity.candidate_pairs == 11);
    nlohmann::json j = rep.to_json();
    CHECK(j["query_recall"] == 1.0);
    CHECK(j["stats"]["comparisons"] == 3);

    std::ostringstream csv;
    rep.write_recall_curve_csv(csv);
    CHECK(csv.str().rfind("comparisons,recall\n", 0) == 0);
}

TEST_CASE("ablation suite preserves the table ordering on fig2") {
    Fig2 f;
    Matcher oracle = make_oracle_matcher(f.gt);
    auto rows = ablation_suite(f.g, f.q, oracle, f.gt, {});
    REQUIRE(rows.size() == 5);
    std::map<std::string, AblationRow> by_mode;
    for (const auto& r : rows) by_mode[r.mode] = r;

    CHECK(by_mode.at("FastER").relative == doctest::Approx(1.0));
    CHECK(by_mode.at("No-RF").comparisons >= by_mode.at("No-B").comparisons);
    CHECK(by_mode.at("No-B").comparisons >= by_mode.at("No-T").comparisons);
    CHECK(by_mode.at("No-T").comparisons >= by_mode.at("FastER").comparisons);
    CHECK(by_mode.at("No-PPS").comparisons >= by_mode.at("FastER").comparisons);
    CHECK(by_mode.at("No-T").recall == doctest::Approx(by_mode.at("FastER").recall));

    std::ostringstream csv;
    write_ablation_csv(csv, rows);
    CHECK(csv.str().rfind("mode,comparisons,relative,recall\n", 0) == 0);
}

TEST_CASE("the synthetic generator is seed-deterministic") {
    SyntheticConfig cfg;
    cfg.n_entities = 60;
    cfg.dup_rate = 0.25;
    cfg.attr_noise = 0.4;
    cfg.seed = 99;
    auto dir_a = temp_dir("gen_a");
    auto dir_b = temp_dir("gen_b");
    SyntheticOutput oa = gen_synthetic(cfg, dir_a);
    SyntheticOutput ob = gen_synthetic(cfg, dir_b);
    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    CHECK(slurp(oa.nodes_path) == slurp(ob.nodes_path));
    CHECK(slurp(oa.edges_path) == slurp(ob.edges_path));
    CHECK(slurp(oa.gt_path) == slurp(ob.gt_path));
    CHECK(oa.duplicate_clusters == ob.duplicate_clusters);
    CHECK(oa.duplicate_clusters > 0);

    SUBCASE("the files load and the manifest counts hold") {
        PropertyGraph g = PropertyGraph::load(oa.nodes_path, oa.edges_path);
        CHECK(g.node_count() == oa.nodes);
        CHECK(g.edge_count() == oa.edges);
        GroundTruth gt = GroundTruth::load(oa.gt_path);
        CHECK(gt.duplicate_pairs().size() == oa.duplicate_pairs);
    }
}

TEST_CASE("dup_rate zero means no duplicate pairs") {
    SyntheticConfig cfg;
    cfg.n_entities = 40;
    cfg.dup_rate = 0.0;
    cfg.seed = 7;
    SyntheticOutput out = gen_synthetic(cfg, temp_dir("gen_zero"));
    CHECK(out.duplicate_clusters == 0);
    CHECK(out.duplicate_pairs == 0);
    GroundTruth gt = GroundTruth::load(out.gt_path);
    CHECK(gt.duplicate_pairs().empty());
}

TEST_CASE("synthetic end-to-end: pipeline resolves the planted duplicates") {
    SyntheticConfig cfg;
    cfg.n_entities = 120;
    cfg.dup_rate = 0.3;
    cfg.attr_noise = 0.3;
    cfg.seed = 21;
    SyntheticOutput out = gen_synthetic(cfg, temp_dir("gen_e2e"));
    PropertyGraph g = PropertyGraph::load(out.nodes_path, out.edges_path);
    Query q = parse_query(out.query_path);
    GroundTruth gt = GroundTruth::load(out.gt_path);
    Matcher oracle = make_oracle_matcher(gt);
    MetricsReport rep = run_bench(g, q, oracle, gt, {}, std::array<uint64_t, 2>{1, 5});
    CHECK(rep.query_recall > 0.9); // typo'd duplicates still satisfy >= 2 rules
    for (auto& [k, e] : rep.err_at_k) CHECK(e == 0.0);
}
