#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphhypo/bench.hpp"
#include "graphhypo/graph_io.hpp"
#include "graphhypo/hypothesis_parse.hpp"
#include "graphhypo/phase.hpp"

namespace {

using namespace graphhypo;
using nlohmann::ordered_json;

constexpr std::uint64_t kDefaultSeed = 0x5EEDULL;

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitInputError = 2;
constexpr int kExitInconclusive = 3;

struct GraphArgs {
    std::string schema, nodes, edges;
    bool allow_isolated = false;

    void attach(CLI::App* app) {
        app->add_option("--schema", schema, "schema JSON file")->required();
        app->add_option("--nodes", nodes, "nodes TSV file")->required();
        app->add_option("--edges", edges, "edges TSV file")->required();
        app->add_flag("--allow-isolated", allow_isolated, "keep nodes without edges");
    }

    AttributedGraph load() const { return load_graph(schema, nodes, edges, allow_isolated); }
};

struct HypothesisArgs {
    std::string text, file;

    void attach(CLI::App* app) {
        auto* t = app->add_option("--hypothesis", text, "hypothesis text");
        auto* f = app->add_option("--hypothesis-file", file, "file with hypothesis text");
        t->excludes(f);
    }

    std::string resolve() const {
        if (!text.empty()) return text;
        if (file.empty()) throw InputError("pass --hypothesis or --hypothesis-file");
        std::ifstream in(file);
        if (!in) throw InputError("cannot open hypothesis file: " + file);
        std::string line, all;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            if (!all.empty()) all += ' ';
            all += line;
        }
        return all;
    }
};

struct SamplerArgs {
    std::string name = "phase-opt";
    std::uint64_t budget = 0;
    double proportion = 0.0;
    std::vector<std::string> params;
    std::uint64_t seed = kDefaultSeed;
    bool entropy = false;

    void attach(CLI::App* app) {
        app->add_option("--sampler", name,
                        "sampler kind (rns dbs prbs res srw frontier nbrw rwr mhrw cnarw "
                        "community-se sbs ffs shortest-path phase phase-opt ground-truth)");
        app->add_option("--budget", budget, "node-visit budget B");
        app->add_option("--proportion", proportion, "budget as a fraction of |V|");
        app->add_option("--param", params, "sampler parameter name=value (repeatable)");
        app->add_option("--seed", seed, "RNG seed (fixed default for reproducibility)");
        app->add_flag("--entropy", entropy, "seed from the system entropy source");
    }

    SamplerSpec spec(const AttributedGraph& g) const {
        SamplerSpec s;
        if (!sampler_kind_from_name(name, s.kind))
            throw InputError("unknown sampler: " + name);
        s.budget = budget;
        if (budget == 0 && proportion > 0.0)
            s.budget = std::max<std::uint64_t>(
                1, std::uint64_t(std::llround(proportion * double(g.node_count()))));
        for (const std::string& p : params) {
            std::size_t eq = p.find('=');
            if (eq == std::string::npos)
                throw InputError("--param expects name=value, got '" + p + "'");
            double v;
            if (!detail::parse_number(p.substr(eq + 1), v))
                throw InputError("--param " + p + ": value is not a number");
            s.params[p.substr(0, eq)] = v;
        }
        return s;
    }

    std::uint64_t resolved_seed() const {
        if (!entropy) return seed;
        std::random_device rd;
        return (std::uint64_t(rd()) << 32) ^ rd();
    }
};

ordered_json result_json(const TestResult& r, const SamplerSpec& spec, std::uint64_t seed) {
    ordered_json j;
    j["outcome"] = r.outcome;
    j["p_value"] = r.p_value ? ordered_json(*r.p_value) : ordered_json(nullptr);
    j["ci"] = r.ci_low ? ordered_json::array({*r.ci_low, *r.ci_high}) : ordered_json(nullptr);
    j["estimate"] = r.estimate ? ordered_json(*r.estimate) : ordered_json(nullptr);
    j["n_relevant"] = r.n_relevant;
    j["inconclusive"] = r.inconclusive;
    j["sampler"] = std::string(sampler_name(spec.kind));
    j["budget"] = spec.budget;
    j["seed"] = seed;
    return j;
}

void dump_contributions(const std::string& path, const Estimate& est) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write: " + path);
    out << "element,value,weight\n";
    for (const Contribution& c : est.contributions)
        out << c.element << ',' << c.value << ',' << c.weight << '\n';
}

int cmd_validate(const GraphArgs& graph_args) {
    AttributedGraph g = graph_args.load();
    std::cout << "nodes=" << g.node_count() << " edges=" << g.edge_count() << "\n";
    for (std::size_t t = 0; t < g.schema().node_types.size(); ++t)
        std::cout << "node_type " << g.schema().node_types[t].name << ": "
                  << g.nodes_of_type(TypeId(t)) << "\n";
    std::vector<std::uint64_t> per_edge_type(g.schema().edge_types.size(), 0);
    for (EdgeId e = 0; e < g.edge_count(); ++e) ++per_edge_type[g.edge_type(e)];
    for (std::size_t t = 0; t < per_edge_type.size(); ++t)
        std::cout << "edge_type " << g.schema().edge_types[t].name << ": "
                  << per_edge_type[t] << "\n";
    std::uint64_t degree_sum = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) degree_sum += g.degree(v);
    if (degree_sum != 2 * g.edge_count()) {
        std::cerr << "invariant violation: sum(degree) != 2|E|\n";
        return kExitInputError;
    }
    return kExitTrue;
}

int cmd_truth(const GraphArgs& graph_args, const HypothesisArgs& hyp_args,
              std::uint64_t limit) {
    AttributedGraph g = graph_args.load();
    Hypothesis h = parse_hypothesis(hyp_args.resolve(), g.schema(), &g);
    GroundTruth gt = ground_truth(g, h, limit);
    ordered_json j;
    j["theta"] = gt.theta;
    j["outcome"] = gt.outcome;
    j["n_relevant"] = gt.n_relevant;
    std::cout << j.dump() << "\n";
    return gt.outcome ? kExitTrue : kExitFalse;
}

int cmd_test(const GraphArgs& graph_args, const HypothesisArgs& hyp_args,
             const SamplerArgs& sampler_args, double alpha, std::uint64_t limit,
             bool literal_eq2, const std::string& contributions_path) {
    AttributedGraph g = graph_args.load();
    Hypothesis h = parse_hypothesis(hyp_args.resolve(), g.schema(), &g);
    SamplerSpec spec = sampler_args.spec(g);
    std::uint64_t seed = sampler_args.resolved_seed();

    if ((spec.kind == SamplerKind::PHASE || spec.kind == SamplerKind::PHASE_OPT) &&
        spec.budget <= std::uint64_t(spec.param("m", 50)))
        std::cerr << "warning: budget " << spec.budget
                  << " <= m; phase adds nodes only while B > m, so the sample "
                     "will be empty\n";

    SampledSubgraph s = spec.kind == SamplerKind::GroundTruth
                            ? ground_truth_sample(g)
                            : run_sampler(g, spec, seed, &h);
    if (spec.kind == SamplerKind::GroundTruth) spec.budget = s.meta.budget;

    EstimateOptions opts;
    opts.literal_eq2 = literal_eq2;
    opts.path_limit = limit;
    opts.collect_contributions = !contributions_path.empty();
    Estimate est = estimate(g, s, h, opts);
    if (est.truncated)
        throw TruncationError("path enumeration exceeded --limit; raise it or tighten "
                              "the hypothesis");
    if (!contributions_path.empty()) dump_contributions(contributions_path, est);
    TestResult r = decide(est, h, alpha);
    std::cout << result_json(r, spec, seed).dump() << "\n";
    if (r.inconclusive) return kExitInconclusive;
    return r.outcome ? kExitTrue : kExitFalse;
}

int cmd_gen(const std::string& config_path, const std::string& out_prefix) {
    std::ifstream in(config_path);
    if (!in) throw InputError("cannot open config: " + config_path);
    ordered_json cfg = ordered_json::parse(in, nullptr, true, true);
    AttributedGraph g = generate_graph(cfg);
    save_graph(g, out_prefix + ".schema.json", out_prefix + ".nodes.tsv",
               out_prefix + ".edges.tsv");
    std::cout << "nodes=" << g.node_count() << " edges=" << g.edge_count() << "\n";
    return kExitTrue;
}

int cmd_bench(const std::string& config_path, const std::string& out_path) {
    std::ifstream in(config_path);
    if (!in) throw InputError("cannot open config: " + config_path);
    ordered_json cfg = ordered_json::parse(in, nullptr, true, true);

    AttributedGraph g = [&] {
        if (cfg.contains("synth")) return generate_graph(cfg.at("synth"));
        const auto& gj = cfg.at("graph");
        return load_graph(gj.at("schema").get<std::string>(),
                          gj.at("nodes").get<std::string>(),
                          gj.at("edges").get<std::string>());
    }();

    BenchTask task;
    task.dataset = cfg.value("dataset", std::string("dataset"));
    task.replicates = cfg.value("replicates", std::uint64_t(30));
    task.master_seed = cfg.value("master_seed", std::uint64_t(1));
    task.path_limit = cfg.value("path_limit", std::uint64_t(100000000ULL));
    task.alpha = cfg.value("alpha", 0.05);
    for (const auto& hj : cfg.at("hypotheses")) {
        std::string id = hj.at("id").get<std::string>();
        Hypothesis h = parse_hypothesis(hj.at("text").get<std::string>(), g.schema(), &g);
        task.hypotheses.emplace_back(std::move(id), std::move(h));
    }
    for (const auto& sj : cfg.at("samplers")) {
        SamplerSpec spec;
        if (!sampler_kind_from_name(sj.at("kind").get<std::string>(), spec.kind))
            throw InputError("unknown sampler kind in config: " +
                             sj.at("kind").get<std::string>());
        if (sj.contains("params"))
            for (const auto& [k, v] : sj.at("params").items())
                spec.params[k] = v.get<double>();
        task.samplers.push_back(std::move(spec));
    }
    task.proportions = cfg.at("proportions").get<std::vector<double>>();

    std::string mode = cfg.value("mode", std::string("benchmark"));
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw InputError("cannot write: " + out_path);

    if (mode == "convergence") {
        for (const auto& [name, h] : task.hypotheses)
            for (const SamplerSpec& spec : task.samplers) {
                auto curve = convergence_curve(g, h, spec, task.proportions,
                                               task.replicates, task.master_seed,
                                               task.path_limit);
                out << "# hypothesis=" << name << " sampler=" << sampler_name(spec.kind)
                    << "\n";
                write_curve_csv(out, curve);
            }
        return kExitTrue;
    }
    if (mode != "benchmark") throw InputError("mode must be 'benchmark' or 'convergence'");

    auto rows = run_benchmark(g, task, &out, &std::cerr);

    // Summary table on stderr.
    std::cerr << "hypothesis\tsampler\tproportion\taccuracy\n";
    std::size_t per_group = task.replicates;
    for (std::size_t gi = 0; gi * per_group < rows.size(); ++gi) {
        std::vector<TestResult> results;
        for (std::size_t r = 0; r < per_group; ++r)
            results.push_back(rows[gi * per_group + r].result);
        const BenchRow& head = rows[gi * per_group];
        std::cerr << head.hypothesis << '\t' << head.sampler << '\t' << head.proportion
                  << '\t' << accuracy(head.truth, results).accuracy << "\n";
    }

    if (cfg.contains("stabilize")) {
        const auto& st = cfg.at("stabilize");
        double threshold = st.value("threshold", 0.9);
        std::uint64_t patience = st.value("patience", std::uint64_t(2));
        for (const auto& [name, h] : task.hypotheses)
            for (const SamplerSpec& spec : task.samplers) {
                auto stable = find_stable_budget(g, h, spec, task.proportions, threshold,
                                                 patience, task.replicates,
                                                 task.master_seed, task.path_limit);
                std::cerr << "stable_budget hypothesis=" << name
                          << " sampler=" << sampler_name(spec.kind) << " ";
                if (stable) std::cerr << "proportion=" << *stable << "\n";
                else std::cerr << "not reached on the configured ladder\n";
            }
    }
    return kExitTrue;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sampling-based hypothesis testing on attributed graphs"};
    app.require_subcommand(1);

    GraphArgs graph_args;
    HypothesisArgs hyp_args;
    SamplerArgs sampler_args;
    double alpha = 0.05;
    std::uint64_t limit = 100000000ULL;
    bool literal_eq2 = false;
    std::string contributions_path, config_path, out_path, out_prefix;

    auto* validate = app.add_subcommand("validate", "load a graph and report its shape");
    graph_args.attach(validate);

    auto* truth = app.add_subcommand("truth", "exact full-graph aggregate and verdict");
    graph_args.attach(truth);
    hyp_args.attach(truth);
    truth->add_option("--limit", limit, "path enumeration limit");

    auto* test = app.add_subcommand("test", "sample, estimate, and test one hypothesis");
    graph_args.attach(test);
    hyp_args.attach(test);
    sampler_args.attach(test);
    test->add_option("--alpha", alpha, "significance level (reporting only)");
    test->add_option("--limit", limit, "path enumeration limit");
    test->add_flag("--literal-eq2", literal_eq2,
                   "literal denominator variant of the node estimator (diagnostic)");
    test->add_option("--dump-contributions", contributions_path,
                     "write per-element contribution CSV");

    auto* bench = app.add_subcommand("bench", "run a benchmark config");
    bench->add_option("--config", config_path, "benchmark config JSON")->required();
    bench->add_option("--out", out_path, "output CSV path")->required();

    auto* gen = app.add_subcommand("gen", "generate a synthetic attributed graph");
    gen->add_option("--config", config_path, "synthetic graph config JSON")->required();
    gen->add_option("--out-prefix", out_prefix, "output path prefix")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(graph_args);
        if (truth->parsed()) return cmd_truth(graph_args, hyp_args, limit);
        if (test->parsed())
            return cmd_test(graph_args, hyp_args, sampler_args, alpha, limit, literal_eq2,
                            contributions_path);
        if (bench->parsed()) return cmd_bench(config_path, out_path);
        if (gen->parsed()) return cmd_gen(config_path, out_prefix);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
