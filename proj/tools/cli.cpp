#include "cli.hpp"

#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "faster/errors.hpp"
#include "faster/matchers.hpp"
#include "faster/metrics.hpp"
#include "faster/pps.hpp"
#include "faster/rules.hpp"
#include "faster/synthetic.hpp"

namespace faster::cli {

namespace {

struct GraphArgs {
    std::string nodes, edges;
};

struct PipelineArgs {
    GraphArgs graph;
    std::string query_path;
    std::string matcher = "oracle";
    std::string ground_truth;
    std::vector<std::string> matcher_attrs;
    double tau = 0.8;
    std::optional<double> threshold;
    std::string weighting; // empty = query's choice
    std::string disable;
    bool no_validate_demand = false;
    std::optional<uint64_t> max_results, max_comparisons;
    std::string blocking_dump;
};

void add_graph_options(CLI::App* cmd, GraphArgs& g) {
    cmd->add_option("--graph-nodes", g.nodes, "nodes CSV (id,label,attrs)")->required();
    cmd->add_option("--graph-edges", g.edges, "edges CSV (src,label,dst)")->required();
}

void add_pipeline_options(CLI::App* cmd, PipelineArgs& a) {
    add_graph_options(cmd, a.graph);
    cmd->add_option("--query", a.query_path, "query JSON document")->required();
    cmd->add_option("--matcher", a.matcher, "oracle|similarity")
        ->check(CLI::IsMember({"oracle", "similarity"}));
    cmd->add_option("--ground-truth", a.ground_truth, "ground-truth CSV (pid,eid)");
    cmd->add_option("--matcher-attrs", a.matcher_attrs,
                    "attributes the similarity matcher compares")
        ->delimiter(',');
    cmd->add_option("--tau", a.tau, "similarity match threshold in [0,1]")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--threshold", a.threshold, "edge-weight threshold override");
    cmd->add_option("--weighting", a.weighting, "count|arcs (overrides query)")
        ->check(CLI::IsMember({"count", "arcs"}));
    cmd->add_option("--disable", a.disable, "components to switch off: RF,B,PPS,T");
    cmd->add_flag("--no-validate-demand", a.no_validate_demand,
                  "emit clusters without entity-level demand validation");
    cmd->add_option("--max-results", a.max_results, "stop after N emissions");
    cmd->add_option("--max-comparisons", a.max_comparisons, "stop after N comparisons");
    cmd->add_option("--dump-blocking", a.blocking_dump,
                    "write the blocking graph as CSV to this path");
}

struct LoadedPipeline {
    PropertyGraph graph;
    Query query;
    std::optional<GroundTruth> gt;
    Matcher matcher;
    RunConfig cfg;
};

LoadedPipeline load_pipeline(const PipelineArgs& a) {
    LoadedPipeline p{PropertyGraph::load(a.graph.nodes, a.graph.edges),
                     parse_query(a.query_path), std::nullopt, {}, {}};

    if (!a.weighting.empty())
        p.query.weighting = a.weighting == "arcs" ? Weighting::arcs : Weighting::count;

    if (!a.ground_truth.empty()) p.gt = GroundTruth::load(a.ground_truth);
    if (a.matcher == "oracle") {
        if (!p.gt)
            throw SchemaError("--ground-truth", "the oracle matcher needs a ground-truth file");
        p.matcher = make_oracle_matcher(*p.gt);
    } else {
        std::vector<std::string> attrs = a.matcher_attrs;
        if (attrs.empty())
            throw SchemaError("--matcher-attrs",
                              "the similarity matcher needs a list of attributes");
        p.matcher = make_similarity_matcher(std::move(attrs), a.tau);
    }

    p.cfg.threshold = a.threshold;
    if (!a.disable.empty()) p.cfg.disable = DisableSet::parse(a.disable);
    p.cfg.validate_demand = !a.no_validate_demand;
    p.cfg.max_results = a.max_results;
    p.cfg.max_comparisons = a.max_comparisons;
    if (!a.blocking_dump.empty()) p.cfg.blocking_csv_path = a.blocking_dump;
    return p;
}

int cmd_query(const PipelineArgs& a, const std::string& stats_path, std::ostream& out) {
    LoadedPipeline p = load_pipeline(a);

    EmitSink sink = [&out](const EmittedEntity& e) {
        out << e.to_json().dump() << '\n';
        out.flush(); // results stream while the run is still going
    };
    RunStats stats = run_pipeline(p.graph, p.query, p.matcher, p.cfg, sink);

    if (p.gt) {
        PairSet truth = query_truth_pairs(p.graph, p.query, *p.gt);
        stats.recall_curve = recall_curve(stats.emission_log, truth);
    }
    std::ofstream sidecar(stats_path, std::ios::binary);
    if (!sidecar) throw Error("cannot write file: " + stats_path);
    sidecar << stats.to_json().dump(2) << '\n';
    return 0;
}

int cmd_validate(const GraphArgs& ga, const std::string& query_path, std::ostream& out,
                 std::ostream& err) {
    int failures = 0;
    std::optional<PropertyGraph> g;
    try {
        g = PropertyGraph::load(ga.nodes, ga.edges);
        out << "graph ok: " << g->node_count() << " nodes, " << g->edge_count()
            << " edges\n";
    } catch (const Error& e) {
        err << "graph error: " << e.what() << '\n';
        ++failures;
    }
    try {
        Query q = parse_query(query_path);
        out << "query ok: " << q.rules.size() << " rules, threshold " << q.threshold
            << '\n';
        for (const DemandPredicate& d : q.demand) {
            if (!q.agg_for(d.attr)) {
                out << "warning: demand attribute \"" << d.attr
                    << "\" has no aggregation mode; entity-level validation "
                       "will reject every cluster\n";
            }
        }
    } catch (const Error& e) {
        err << "query error: " << e.what() << '\n';
        ++failures;
    }
    return failures == 0 ? 0 : 2;
}

int cmd_bench(const PipelineArgs& a, const std::string& report_path,
              const std::string& curve_path, std::vector<uint64_t> ks,
              std::ostream& out, std::ostream& err) {
    LoadedPipeline p = load_pipeline(a);
    if (!p.gt) throw SchemaError("--ground-truth", "bench needs a ground-truth file");
    if (ks.empty()) ks = {1, 5, 10, 20};

    MetricsReport rep = run_bench(p.graph, p.query, p.matcher, *p.gt, p.cfg, ks, &err);

    std::ofstream report(report_path, std::ios::binary);
    if (!report) throw Error("cannot write file: " + report_path);
    report << rep.to_json().dump(2) << '\n';

    std::ofstream curve(curve_path, std::ios::binary);
    if (!curve) throw Error("cannot write file: " + curve_path);
    rep.write_recall_curve_csv(curve);

    out << "recall " << rep.query_recall << ", comparisons " << rep.comparisons
        << ", emissions " << rep.stats.emissions << '\n';
    out << "report: " << report_path << ", curve: " << curve_path << '\n';
    return 0;
}

int cmd_ablate(const PipelineArgs& a, const std::string& out_path, std::ostream& out) {
    LoadedPipeline p = load_pipeline(a);
    if (!p.gt) throw SchemaError("--ground-truth", "ablate needs a ground-truth file");
    auto rows = ablation_suite(p.graph, p.query, p.matcher, *p.gt, p.cfg);
    if (out_path.empty()) {
        write_ablation_csv(out, rows);
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw Error("cannot write file: " + out_path);
        write_ablation_csv(f, rows);
        out << "ablation table: " << out_path << '\n';
    }
    return 0;
}

int cmd_gen(const SyntheticConfig& cfg, const std::string& out_dir, std::ostream& out) {
    SyntheticOutput res = gen_synthetic(cfg, out_dir);
    nlohmann::json m = res.manifest();
    m["out_dir"] = out_dir;
    out << m.dump(2) << '\n';
    return 0;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"On-demand entity resolution over property graphs"};
    app.require_subcommand(1);

    PipelineArgs query_args;
    std::string stats_path = "run_stats.json";
    CLI::App* query = app.add_subcommand("query", "resolve and stream entities as NDJSON");
    add_pipeline_options(query, query_args);
    query->add_option("--stats", stats_path, "RunStats sidecar JSON path");

    GraphArgs validate_graph;
    std::string validate_query;
    CLI::App* validate = app.add_subcommand("validate", "check graph and query files");
    add_graph_options(validate, validate_graph);
    validate->add_option("--query", validate_query, "query JSON document")->required();

    PipelineArgs bench_args;
    std::string report_path = "metrics.json";
    std::string curve_path = "recall_curve.csv";
    std::vector<uint64_t> ks;
    CLI::App* bench = app.add_subcommand("bench", "run once and write a metrics report");
    add_pipeline_options(bench, bench_args);
    bench->add_option("--report", report_path, "metrics JSON output path");
    bench->add_option("--curve", curve_path, "recall-curve CSV output path");
    bench->add_option("--ks", ks, "k values for Err@k")->delimiter(',');

    PipelineArgs ablate_args;
    std::string ablate_out;
    CLI::App* ablate = app.add_subcommand("ablate", "component-removal comparison table");
    add_pipeline_options(ablate, ablate_args);
    ablate->add_option("--out", ablate_out, "CSV output path (default stdout)");

    SyntheticConfig gen_cfg;
    std::string gen_out;
    CLI::App* gen = app.add_subcommand("gen", "generate a synthetic fixture");
    gen->add_option("--entities", gen_cfg.n_entities, "number of distinct entities")
        ->required();
    gen->add_option("--dup-rate", gen_cfg.dup_rate, "fraction of entities duplicated");
    gen->add_option("--noise", gen_cfg.attr_noise, "per-attribute typo probability");
    gen->add_option("--seed", gen_cfg.seed, "RNG seed; fixes output bit-exactly");
    gen->add_option("--out", gen_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (query->parsed()) return cmd_query(query_args, stats_path, out);
        if (validate->parsed()) return cmd_validate(validate_graph, validate_query, out, err);
        if (bench->parsed())
            return cmd_bench(bench_args, report_path, curve_path, ks, out, err);
        if (ablate->parsed()) return cmd_ablate(ablate_args, ablate_out, out);
        if (gen->parsed()) return cmd_gen(gen_cfg, gen_out, out);
    } catch (const MatcherFailure& e) {
        err << "runtime error: " << e.what() << '\n';
        return 3;
    } catch (const MissingGroundTruth& e) {
        err << "runtime error: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "runtime error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

} // namespace faster::cli
