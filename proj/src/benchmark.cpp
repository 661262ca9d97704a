#include "pcmax/benchmark.hpp"

#include <cmath>
#include <iomanip>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>

#include "pcmax/correlation.hpp"
#include "pcmax/errors.hpp"

namespace pcmax {

CellSeeds benchmark_seeds(std::uint64_t seed_base, int degree_index, int run) {
    const std::uint64_t cell = seed_base + 100000ull * degree_index + 1000ull * run;
    return CellSeeds{cell, cell + 1, cell + 2};
}

namespace {

std::unique_ptr<IndependenceTest> make_data_test(TestKind kind, const Dataset& data,
                                                 double alpha, double penalty) {
    switch (kind) {
        case TestKind::FisherZ:
            return std::make_unique<FisherZTest>(correlation(data), alpha);
        case TestKind::BicDiff:
            return std::make_unique<BicDiffTest>(data, penalty);
        case TestKind::Oracle:
            throw InvalidInputError("oracle test needs a true graph, not a dataset");
    }
    throw InternalError("bad test enum");
}

std::string format_ratio(const std::optional<double>& v) {
    if (!v) return "NA";
    std::ostringstream out;
    out << std::fixed << std::setprecision(4) << *v;
    return out.str();
}

std::string format_seconds(double v) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2) << v;
    return out.str();
}

std::string format_degree(double d) {
    if (d == std::floor(d)) return std::to_string(static_cast<long>(d));
    std::ostringstream out;
    out << d;
    return out.str();
}

}  // namespace

std::vector<BenchmarkRow> run_benchmark(const BenchmarkConfig& config,
                                        const BenchmarkObserver& observer,
                                        std::ostream* progress) {
    if (config.reps < 1) throw InvalidInputError("reps must be positive");
    std::vector<BenchmarkRow> rows;
    for (int di = 0; di < static_cast<int>(config.avg_degrees.size()); ++di) {
        const double degree = config.avg_degrees[di];
        for (int run = 1; run <= config.reps; ++run) {
            const CellSeeds seeds = benchmark_seeds(config.seed_base, di, run);
            const MixedGraph dag =
                random_dag(RandomGraphConfig{config.nodes, degree, seeds.graph});
            const SemModel model = parameterize(dag, seeds.param);
            const Dataset data = simulate(model, config.samples, seeds.data);
            const MixedGraph true_pattern = dag_to_cpdag(dag);
            const auto test = make_data_test(config.test, data, config.alpha, config.penalty);
            for (Algorithm algorithm : config.algorithms) {
                if (progress) {
                    *progress << "benchmark: degree=" << format_degree(degree) << " run=" << run
                              << " algorithm=" << to_string(algorithm) << "\n";
                }
                SearchConfig sc{algorithm, config.alpha, config.penalty, config.max_depth,
                                config.threads};
                const SearchResult result = run_search(sc, *test);
                BenchmarkRow row{algorithm, degree, run,
                                 evaluate(true_pattern, result.graph, result.elapsed_seconds),
                                 result.ambiguous.size(),
                                 unshielded_triples(result.graph).size()};
                if (observer) observer(row, result, true_pattern, data);
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

std::string benchmark_csv(const BenchmarkConfig& config, const std::vector<BenchmarkRow>& rows) {
    std::ostringstream out;
    out << "# nodes=" << config.nodes << " samples=" << config.samples
        << " reps=" << config.reps << " test=" << to_string(config.test)
        << " alpha=" << config.alpha << " penalty=" << config.penalty
        << " max_depth=" << config.max_depth << " seed_base=" << config.seed_base
        << " seeds_per_cell=graph:base+100000*degree_index+1000*run,param:graph+1,data:graph+2\n";
    out << "algorithm,avg_degree,run,ap,ar,ahp,ahr,bid,elapsed_seconds\n";
    const auto write_row = [&](const std::string& alg, double degree, const std::string& run,
                               const MetricsRecord& m) {
        out << alg << ',' << format_degree(degree) << ',' << run << ',' << format_ratio(m.ap)
            << ',' << format_ratio(m.ar) << ',' << format_ratio(m.ahp) << ','
            << format_ratio(m.ahr) << ',' << format_ratio(m.bid) << ','
            << format_seconds(m.elapsed_seconds) << '\n';
    };
    for (const BenchmarkRow& row : rows) {
        write_row(to_string(row.algorithm), row.avg_degree, std::to_string(row.run), row.metrics);
    }
    // MEAN rows in (degree, algorithm) order, averaging defined entries only.
    for (const double degree : config.avg_degrees) {
        for (const Algorithm algorithm : config.algorithms) {
            MetricsRecord mean;
            double bid_sum = 0.0, elapsed_sum = 0.0;
            long count = 0;
            double sums[4] = {0, 0, 0, 0};
            long counts[4] = {0, 0, 0, 0};
            for (const BenchmarkRow& row : rows) {
                if (row.algorithm != algorithm || row.avg_degree != degree) continue;
                ++count;
                bid_sum += row.metrics.bid;
                elapsed_sum += row.metrics.elapsed_seconds;
                const std::optional<double>* fields[4] = {&row.metrics.ap, &row.metrics.ar,
                                                          &row.metrics.ahp, &row.metrics.ahr};
                for (int f = 0; f < 4; ++f) {
                    if (fields[f]->has_value()) {
                        sums[f] += **fields[f];
                        ++counts[f];
                    }
                }
            }
            if (count == 0) continue;
            std::optional<double>* targets[4] = {&mean.ap, &mean.ar, &mean.ahp, &mean.ahr};
            for (int f = 0; f < 4; ++f) {
                if (counts[f] > 0) *targets[f] = sums[f] / counts[f];
            }
            mean.bid = bid_sum / count;
            mean.elapsed_seconds = elapsed_sum / count;
            write_row(to_string(algorithm), degree, "MEAN", mean);
        }
    }
    return out.str();
}

OracleCheckReport oracle_check(const OracleCheckConfig& config, std::ostream* progress) {
    if (config.trials < 1) throw InvalidInputError("trials must be positive");
    if (config.max_nodes < 2) throw InvalidInputError("max-nodes must be at least 2");
    OracleCheckReport report;
    report.trials = config.trials;
    const std::vector<Algorithm> algorithms = {Algorithm::Pc, Algorithm::Cpc, Algorithm::PcStable,
                                               Algorithm::PcMax};
    for (Algorithm a : algorithms) report.exact[a] = 0;

    std::mt19937_64 rng(config.seed);
    std::uniform_int_distribution<int> node_count(2, config.max_nodes);
    for (int trial = 0; trial < config.trials; ++trial) {
        const int n = node_count(rng);
        const std::uint64_t graph_seed = rng();
        const std::uint64_t max_edges = static_cast<std::uint64_t>(n) * (n - 1) / 2;
        double degree = config.avg_degree;
        if (std::llround(degree * n / 2.0) > static_cast<long long>(max_edges)) {
            degree = 2.0 * static_cast<double>(max_edges) / n;  // clamp tiny graphs
        }
        const MixedGraph dag = random_dag(RandomGraphConfig{n, degree, graph_seed});
        const MixedGraph pattern = dag_to_cpdag(dag);
        const OracleTest oracle(dag);
        for (Algorithm algorithm : algorithms) {
            SearchConfig sc;
            sc.algorithm = algorithm;
            sc.max_depth = config.max_depth;
            const SearchResult result = run_search(sc, oracle);
            bool exact = result.graph == pattern;
            if (algorithm == Algorithm::Cpc) exact = exact && result.ambiguous.empty();
            if (exact) report.exact[algorithm] += 1;
            if (algorithm == Algorithm::PcMax) {
                for (const Edge& e : result.graph.edges()) {
                    if (e.at_a == Endpoint::Arrow && e.at_b == Endpoint::Arrow) {
                        report.pcmax_bidirected += 1;
                    }
                }
            }
        }
        if (progress && (trial + 1) % 50 == 0) {
            *progress << "oracle-check: " << trial + 1 << "/" << config.trials << " trials\n";
        }
    }
    return report;
}

bool OracleCheckReport::all_exact() const {
    for (const auto& [alg, count] : exact) {
        if (count != trials) return false;
    }
    return true;
}

}  // namespace pcmax
