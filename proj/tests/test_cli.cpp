#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "support/paths.hpp"

using faster::testing::fixture;

namespace {

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
    std::vector<const char*> argv{"faster"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = faster::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("query streams NDJSON and writes a stats sidecar") {
    std::string stats = temp_path("cli_stats.json");
    std::string out, err;
    int code = run_cli({"query",
                        "--graph-nodes", fixture("fig2/nodes.csv"),
                        "--graph-edges", fixture("fig2/edges.csv"),
                        "--query", fixture("fig2/query.json"),
                        "--matcher", "oracle",
                        "--ground-truth", fixture("fig2/gt.csv"),
                        "--stats", stats},
                       &out, &err);
    CHECK(code == 0);
    CHECK(err.empty());

    // one JSON object per line, with the documented fields
    std::istringstream lines(out);
    std::string line;
    size_t n = 0;
    while (std::getline(lines, line)) {
        nlohmann::json e = nlohmann::json::parse(line);
        CHECK(e.contains("members"));
        CHECK(e.contains("comparisons"));
        CHECK(e.contains("elapsed_ms"));
        CHECK(e["demand_ok"] == true);
        ++n;
    }
    CHECK(n >= 1);

    std::ifstream side(stats);
    REQUIRE(side.good());
    nlohmann::json s = nlohmann::json::parse(side);
    CHECK(s["comparisons"] == 3);
    CHECK(s["emissions"] == n);
    CHECK(!s["recall_curve"].empty()); // gt was provided
}

TEST_CASE("query respects threshold and disable overrides") {
    std::string stats = temp_path("cli_stats2.json");
    int code = run_cli({"query",
                        "--graph-nodes", fixture("fig2/nodes.csv"),
                        "--graph-edges", fixture("fig2/edges.csv"),
                        "--query", fixture("fig2/query.json"),
                        "--matcher", "oracle",
                        "--ground-truth", fixture("fig2/gt.csv"),
                        "--disable", "T",
                        "--stats", stats});
    CHECK(code == 0);
    nlohmann::json s = nlohmann::json::parse(std::ifstream(stats));
    CHECK(s["comparisons"] == 5);
    CHECK(s["pruned_pairs"] == 3);
}

TEST_CASE("oracle matcher without ground truth exits 2") {
    std::string err;
    int code = run_cli({"query",
                        "--graph-nodes", fixture("fig2/nodes.csv"),
                        "--graph-edges", fixture("fig2/edges.csv"),
                        "--query", fixture("fig2/query.json"),
                        "--matcher", "oracle"},
                       nullptr, &err);
    CHECK(code == 2);
    CHECK(err.find("ground-truth") != std::string::npos);
}

TEST_CASE("similarity matcher needs attributes") {
    std::string err;
    int code = run_cli({"query",
                        "--graph-nodes", fixture("fig2/nodes.csv"),
                        "--graph-edges", fixture("fig2/edges.csv"),
                        "--query", fixture("fig2/query.json"),
                        "--matcher", "similarity"},
                       nullptr, &err);
    CHECK(code == 2);

    std::string stats = temp_path("cli_stats3.json");
    code = run_cli({"query",
                    "--graph-nodes", fixture("fig2/nodes.csv"),
                    "--graph-edges", fixture("fig2/edges.csv"),
                    "--query", fixture("fig2/query.json"),
                    "--matcher", "similarity",
                    "--matcher-attrs", "Lastname,Firstname,Phone",
                    "--tau", "0.85",
                    "--stats", stats});
    CHECK(code == 0);
}

TEST_CASE("unsatisfiable demand emits nothing but exits 0") {
    // craft a query whose demand nothing satisfies
    auto q = nlohmann::json::parse(std::ifstream(fixture("fig2/query.json")));
    q["demand"][0]["value"] = 1000;
    std::string qpath = temp_path("cli_impossible.json");
    std::ofstream(qpath) << q.dump();

    std::string out;
    int code = run_cli({"query",
                        "--graph-nodes", fixture("fig2/nodes.csv"),
                        "--graph-edges", fixture("fig2/edges.csv"),
                        "--query", qpath,
                        "--matcher", "oracle",
                        "--ground-truth", fixture("fig2/gt.csv"),
                        "--stats", temp_path("cli_stats4.json")},
                       &out);
    CHECK(code == 0);
    CHECK(out.empty());
}

TEST_CASE("max-results stops the run after one emission") {
    std::string stats = temp_path("cli_stats5.json");
    std::string out;
    int code = run_cli({"query",
                        "--graph-nodes", fixture("fig2/nodes.csv"),
                        "--graph-edges", fixture("fig2/edges.csv"),
                        "--query", fixture("fig2/query.json"),
                        "--matcher", "oracle",
                        "--ground-truth", fixture("fig2/gt.csv"),
                        "--max-results", "1",
                        "--stats", stats},
                       &out);
    CHECK(code == 0);
    nlohmann::json s = nlohmann::json::parse(std::ifstream(stats));
    CHECK(s["emissions"] == 1);
    CHECK(s["budget_exhausted"] == true);
    // stopped before exhausting the candidate pairs
    CHECK(s["comparisons"].get<uint64_t>() < s["filtered_pairs"].get<uint64_t>());
}

TEST_CASE("validate accepts the fixtures and rejects broken input") {
    SUBCASE("clean fixture exits 0") {
        std::string out;
        int code = run_cli({"validate",
                            "--graph-nodes", fixture("fig2/nodes.csv"),
                            "--graph-edges", fixture("fig2/edges.csv"),
                            "--query", fixture("fig2/query.json")},
                           &out);
        CHECK(code == 0);
        CHECK(out.find("graph ok") != std::string::npos);
    }
    SUBCASE("dangling edge exits 2 with the line number") {
        std::string nodes = temp_path("cli_nodes.csv");
        std::string edges = temp_path("cli_edges.csv");
        std::ofstream(nodes) << "id,label,attrs\nv1,user,{}\n";
        std::ofstream(edges) << "src,label,dst\nv1,watched,v99\n";
        std::string err;
        int code = run_cli({"validate", "--graph-nodes", nodes, "--graph-edges", edges,
                            "--query", fixture("fig2/query.json")},
                           nullptr, &err);
        CHECK(code == 2);
        CHECK(err.find("v99") != std::string::npos);
        CHECK(err.find("line 2") != std::string::npos);
    }
    SUBCASE("undeclared rule variable exits 2 naming the var") {
        auto q = nlohmann::json::parse(std::ifstream(fixture("fig2/query.json")));
        q["rules"][0]["lhs"][0]["vars"] = {"x", "zz"};
        std::string qpath = temp_path("cli_badrule.json");
        std::ofstream(qpath) << q.dump();
        std::string err;
        int code = run_cli({"validate",
                            "--graph-nodes", fixture("fig2/nodes.csv"),
                            "--graph-edges", fixture("fig2/edges.csv"),
                            "--query", qpath},
                           nullptr, &err);
        CHECK(code == 2);
        CHECK(err.find("zz") != std::string::npos);
    }
}

TEST_CASE("bench writes a metrics report and a recall curve") {
    std::string report = temp_path("cli_report.json");
    std::string curve = temp_path("cli_curve.csv");
    int code = run_cli({"bench",
                        "--graph-nodes", fixture("fig2/nodes.csv"),
                        "--graph-edges", fixture("fig2/edges.csv"),
                        "--query", fixture("fig2/query.json"),
                        "--matcher", "oracle",
                        "--ground-truth", fixture("fig2/gt.csv"),
                        "--report", report,
                        "--curve", curve,
                        "--ks", "1,2"});
    CHECK(code == 0);
    nlohmann::json rep = nlohmann::json::parse(std::ifstream(report));
    CHECK(rep["query_recall"] == 1.0);
    CHECK(rep["err_at_k"]["1"] == 0.0);
    std::ifstream c(curve);
    std::string header;
    std::getline(c, header);
    CHECK(header == "comparisons,recall");
}

TEST_CASE("ablate emits the comparison table") {
    std::string out;
    int code = run_cli({"ablate",
                        "--graph-nodes", fixture("fig2/nodes.csv"),
                        "--graph-edges", fixture("fig2/edges.csv"),
                        "--query", fixture("fig2/query.json"),
                        "--matcher", "oracle",
                        "--ground-truth", fixture("fig2/gt.csv")},
                       &out);
    CHECK(code == 0);
    CHECK(out.find("mode,comparisons,relative,recall") != std::string::npos);
    CHECK(out.find("FastER,") != std::string::npos);
    CHECK(out.find("No-RF,") != std::string::npos);
}

TEST_CASE("gen writes a loadable fixture set") {
    std::string dir = temp_path("cli_gen");
    std::string out;
    int code = run_cli({"gen", "--entities", "50", "--dup-rate", "0.2", "--seed", "5",
                        "--out", dir},
                       &out);
    CHECK(code == 0);
    nlohmann::json m = nlohmann::json::parse(out);
    CHECK(m["nodes"].get<size_t>() > 50);
    int v = run_cli({"validate",
                     "--graph-nodes", dir + "/nodes.csv",
                     "--graph-edges", dir + "/edges.csv",
                     "--query", dir + "/query.json"});
    CHECK(v == 0);
}

TEST_CASE("usage errors exit 2") {
    std::string err;
    CHECK(run_cli({"query"}, nullptr, &err) == 2);
    CHECK(run_cli({"frobnicate"}, nullptr, &err) == 2);
    CHECK(run_cli({}, nullptr, &err) == 2);
}
