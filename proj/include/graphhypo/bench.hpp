#pragma once

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "graphhypo/estimate.hpp"
#include "graphhypo/phase.hpp"
#include "graphhypo/samplers.hpp"
#include "graphhypo/stat_test.hpp"
#include "graphhypo/synth.hpp"

namespace graphhypo {

struct GroundTruth {
    double theta = 0.0;
    bool outcome = false;
    std::uint64_t n_relevant = 0;
};

// Exact full-graph aggregate and verdict via the same estimation code the
// sampled path uses, fed with the whole-graph pseudo-sample. Throws on an
// unsatisfiable hypothesis (undefined aggregate) and on path-limit overflow.
inline GroundTruth ground_truth(const AttributedGraph& g, const Hypothesis& h,
                                std::uint64_t path_limit = 100000000ULL) {
    EstimateOptions opts;
    opts.path_limit = path_limit;
    Estimate est = estimate(g, ground_truth_sample(g), h, opts);
    if (est.truncated)
        throw TruncationError("ground truth enumeration exceeded the path limit (" +
                              std::to_string(path_limit) + ")");
    if (est.inconclusive)
        throw InputError("hypothesis matches no element; its aggregate is undefined");
    GroundTruth gt;
    gt.theta = *est.value;
    gt.outcome = predicate_holds(gt.theta, h.op, h.constant);
    gt.n_relevant = est.n_relevant;
    return gt;
}

struct BenchRow {
    std::string dataset;
    std::string hypothesis;
    std::string sampler;
    double proportion = 0.0;
    std::uint64_t seed = 0;
    TestResult result;
    bool truth = false;
    std::optional<double> abs_error;
    double t_sample_s = 0.0;
    double t_extract_s = 0.0;
    double t_test_s = 0.0;
    bool failed = false;
    std::string error;
};

inline constexpr const char* kBenchCsvHeader =
    "dataset,hypothesis,sampler,proportion,seed,outcome,truth,estimate,abs_error,"
    "n_relevant,p_value,ci_low,ci_high,t_sample_s,t_extract_s,t_test_s";

namespace detail {

inline std::string csv_num(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

inline std::string csv_opt(const std::optional<double>& v) {
    return v ? csv_num(*v) : std::string();
}

inline unsigned worker_count(std::size_t jobs) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("GRAPHHYPO_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) n = unsigned(v);
    }
    return unsigned(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

// Runs fn(i) for i in [0, jobs) on a bounded pool.
template <typename Fn>
void parallel_for(std::size_t jobs, Fn&& fn) {
    unsigned workers = worker_count(jobs);
    if (workers <= 1) {
        for (std::size_t i = 0; i < jobs; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= jobs) return;
                fn(i);
            }
        });
    for (auto& t : pool) t.join();
}

}  // namespace detail

inline void write_bench_row(std::ostream& out, const BenchRow& r) {
    out << r.dataset << ',' << r.hypothesis << ',' << r.sampler << ','
        << detail::csv_num(r.proportion) << ',' << r.seed << ','
        << (r.result.inconclusive ? std::string() : std::string(r.result.outcome ? "1" : "0"))
        << ',' << (r.truth ? 1 : 0) << ',' << detail::csv_opt(r.result.estimate) << ','
        << detail::csv_opt(r.abs_error) << ',' << r.result.n_relevant << ','
        << detail::csv_opt(r.result.p_value) << ',' << detail::csv_opt(r.result.ci_low) << ','
        << detail::csv_opt(r.result.ci_high) << ',' << detail::csv_num(r.t_sample_s) << ','
        << detail::csv_num(r.t_extract_s) << ',' << detail::csv_num(r.t_test_s) << '\n';
}

struct BenchTask {
    std::string dataset;
    std::vector<std::pair<std::string, Hypothesis>> hypotheses;
    std::vector<SamplerSpec> samplers;
    std::vector<double> proportions;
    std::uint64_t replicates = 30;
    std::uint64_t master_seed = 1;
    std::uint64_t path_limit = 100000000ULL;
    double alpha = 0.05;
};

// One sampled replicate end to end: sample, extract, test.
inline BenchRow run_replicate(const AttributedGraph& g, const std::string& dataset,
                              const std::string& hyp_name, const Hypothesis& h, bool truth,
                              SamplerSpec spec, double proportion, std::uint64_t seed,
                              std::uint64_t path_limit, double alpha) {
    BenchRow row;
    row.dataset = dataset;
    row.hypothesis = hyp_name;
    row.sampler = std::string(sampler_name(spec.kind));
    row.proportion = proportion;
    row.seed = seed;
    row.truth = truth;
    try {
        spec.budget = std::min<std::uint64_t>(
            g.node_count(),
            std::max<std::uint64_t>(1, std::uint64_t(std::llround(
                                           proportion * double(g.node_count())))));
        auto t0 = std::chrono::steady_clock::now();
        SampledSubgraph s = run_sampler(g, spec, seed, &h);
        auto t1 = std::chrono::steady_clock::now();
        EstimateOptions opts;
        opts.path_limit = path_limit;
        Estimate est = estimate(g, s, h, opts);
        auto t2 = std::chrono::steady_clock::now();
        row.result = decide(est, h, alpha);
        auto t3 = std::chrono::steady_clock::now();
        row.t_sample_s = std::chrono::duration<double>(t1 - t0).count();
        row.t_extract_s = std::chrono::duration<double>(t2 - t1).count();
        row.t_test_s = std::chrono::duration<double>(t3 - t2).count();
    } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
        row.result = TestResult{};
        row.result.inconclusive = true;
    }
    return row;
}

// Full benchmark: k replicates per (hypothesis, sampler, proportion), rows in
// deterministic order, accuracy/time summaries appended as comment lines.
inline std::vector<BenchRow> run_benchmark(const AttributedGraph& g, const BenchTask& task,
                                           std::ostream* csv = nullptr,
                                           std::ostream* log = nullptr) {
    std::vector<GroundTruth> truths;
    truths.reserve(task.hypotheses.size());
    for (const auto& [name, h] : task.hypotheses) truths.push_back(ground_truth(g, h, task.path_limit));

    struct Job {
        std::size_t h, s, p, rep;
    };
    std::vector<Job> jobs;
    for (std::size_t hi = 0; hi < task.hypotheses.size(); ++hi)
        for (std::size_t si = 0; si < task.samplers.size(); ++si)
            for (std::size_t pi = 0; pi < task.proportions.size(); ++pi)
                for (std::size_t rep = 0; rep < task.replicates; ++rep)
                    jobs.push_back({hi, si, pi, rep});

    std::vector<BenchRow> rows(jobs.size());
    detail::parallel_for(jobs.size(), [&](std::size_t i) {
        const Job& j = jobs[i];
        const auto& [hname, h] = task.hypotheses[j.h];
        BenchRow row = run_replicate(g, task.dataset, hname, h, truths[j.h].outcome,
                                     task.samplers[j.s], task.proportions[j.p],
                                     split_seed(task.master_seed, j.rep), task.path_limit,
                                     task.alpha);
        if (row.result.estimate)
            row.abs_error = std::fabs(*row.result.estimate - truths[j.h].theta);
        rows[i] = std::move(row);
    });

    if (log)
        for (const BenchRow& r : rows)
            if (r.failed)
                (*log) << "replicate failed: " << r.hypothesis << "/" << r.sampler << "/p="
                       << r.proportion << " seed=" << r.seed << ": " << r.error << "\n";

    if (csv) {
        (*csv) << kBenchCsvHeader << '\n';
        for (const BenchRow& r : rows) write_bench_row(*csv, r);
        // Summaries per (hypothesis, sampler, proportion) group.
        std::size_t per_group = task.replicates;
        for (std::size_t gi = 0; gi * per_group < rows.size(); ++gi) {
            std::vector<TestResult> results;
            double t_total = 0.0;
            for (std::size_t r = 0; r < per_group; ++r) {
                const BenchRow& row = rows[gi * per_group + r];
                results.push_back(row.result);
                t_total += row.t_sample_s + row.t_extract_s + row.t_test_s;
            }
            const BenchRow& head = rows[gi * per_group];
            AccuracyReport rep = accuracy(head.truth, results);
            (*csv) << "# summary hypothesis=" << head.hypothesis
                   << " sampler=" << head.sampler << " proportion=" << head.proportion
                   << " accuracy=" << rep.accuracy << " mean_time_s="
                   << t_total / double(per_group) << '\n';
        }
    }
    return rows;
}

struct CurvePoint {
    double proportion = 0.0;
    std::optional<double> mean_abs_error;
    std::optional<double> std_abs_error;
    std::uint64_t n_conclusive = 0;
    std::uint64_t n_runs = 0;
};

// Estimator-error curve over budget proportions; inconclusive replicates are
// recorded without an error value.
inline std::vector<CurvePoint> convergence_curve(const AttributedGraph& g,
                                                 const Hypothesis& h, SamplerSpec spec,
                                                 std::span<const double> proportions,
                                                 std::uint64_t k, std::uint64_t master_seed,
                                                 std::uint64_t path_limit = 100000000ULL) {
    GroundTruth gt = ground_truth(g, h, path_limit);
    std::vector<CurvePoint> curve;
    for (double prop : proportions) {
        std::vector<std::optional<double>> errors(k);
        detail::parallel_for(k, [&](std::size_t rep) {
            BenchRow row = run_replicate(g, "", "", h, gt.outcome, spec, prop,
                                         split_seed(master_seed, rep), path_limit, 0.05);
            if (row.result.estimate)
                errors[rep] = std::fabs(*row.result.estimate - gt.theta);
        });
        CurvePoint pt;
        pt.proportion = prop;
        pt.n_runs = k;
        double sum = 0.0;
        for (const auto& e : errors)
            if (e) {
                ++pt.n_conclusive;
                sum += *e;
            }
        if (pt.n_conclusive > 0) {
            double mean = sum / double(pt.n_conclusive);
            double ss = 0.0;
            for (const auto& e : errors)
                if (e) ss += (*e - mean) * (*e - mean);
            pt.mean_abs_error = mean;
            pt.std_abs_error = pt.n_conclusive > 1
                                   ? std::sqrt(ss / double(pt.n_conclusive - 1))
                                   : 0.0;
        }
        curve.push_back(pt);
    }
    return curve;
}

inline void write_curve_csv(std::ostream& out, std::span<const CurvePoint> curve) {
    out << "proportion,mean_abs_error,std_abs_error,n_conclusive,n_runs\n";
    for (const CurvePoint& pt : curve)
        out << detail::csv_num(pt.proportion) << ',' << detail::csv_opt(pt.mean_abs_error)
            << ',' << detail::csv_opt(pt.std_abs_error) << ',' << pt.n_conclusive << ','
            << pt.n_runs << '\n';
}

// Budget search: walk the proportion ladder until accuracy over k replicates
// stays at or above `threshold` for `patience` consecutive rungs. Returns the
// first proportion of the stable streak, or nullopt if never stable.
inline std::optional<double> find_stable_budget(const AttributedGraph& g, const Hypothesis& h,
                                                const SamplerSpec& spec,
                                                std::span<const double> ladder,
                                                double threshold, std::uint64_t patience,
                                                std::uint64_t k, std::uint64_t master_seed,
                                                std::uint64_t path_limit = 100000000ULL) {
    GroundTruth gt = ground_truth(g, h, path_limit);
    std::uint64_t streak = 0;
    std::optional<double> first;
    for (double prop : ladder) {
        std::vector<TestResult> results(k);
        detail::parallel_for(k, [&](std::size_t rep) {
            results[rep] = run_replicate(g, "", "", h, gt.outcome, spec, prop,
                                         split_seed(master_seed, rep), path_limit, 0.05)
                               .result;
        });
        double acc = accuracy(gt.outcome, results).accuracy;
        if (acc >= threshold) {
            if (streak == 0) first = prop;
            if (++streak >= patience) return first;
        } else {
            streak = 0;
            first.reset();
        }
    }
    return std::nullopt;
}

}  // namespace graphhypo
