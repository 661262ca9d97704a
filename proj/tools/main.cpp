#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "pcmax/benchmark.hpp"
#include "pcmax/correlation.hpp"
#include "pcmax/dataset.hpp"
#include "pcmax/errors.hpp"
#include "pcmax/graph_io.hpp"
#include "pcmax/search.hpp"
#include "pcmax/sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

char delimiter_from_name(const std::string& name) {
    if (name == "tab") return '\t';
    if (name == "comma") return ',';
    throw CLI::ValidationError("--delimiter must be 'tab' or 'comma'");
}

bool looks_like_correlation_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw pcmax::InvalidInputError("cannot read file: " + path);
    std::string line;
    std::getline(in, line);
    return line.rfind("n=", 0) == 0;
}

struct SimulateArgs {
    int nodes = 1000;
    double avg_degree = 2.0;
    long samples = 1000;
    std::uint64_t graph_seed = 1, param_seed = 2, data_seed = 3;
    std::string out_dir;
    std::string delimiter = "tab";
};

int cmd_simulate(const SimulateArgs& a) {
    std::cout << "config: subcommand=simulate nodes=" << a.nodes << " avg_degree=" << a.avg_degree
              << " samples=" << a.samples << " graph_seed=" << a.graph_seed
              << " param_seed=" << a.param_seed << " data_seed=" << a.data_seed
              << " out=" << a.out_dir << " delimiter=" << a.delimiter << "\n";
    const char delim = delimiter_from_name(a.delimiter);
    std::filesystem::create_directories(a.out_dir);
    const pcmax::MixedGraph dag =
        pcmax::random_dag(pcmax::RandomGraphConfig{a.nodes, a.avg_degree, a.graph_seed});
    const pcmax::SemModel model = pcmax::parameterize(dag, a.param_seed);
    const pcmax::Dataset data = pcmax::simulate(model, a.samples, a.data_seed);
    const auto data_path = std::filesystem::path(a.out_dir) / "data.tsv";
    const auto truth_path = std::filesystem::path(a.out_dir) / "truth.graph.txt";
    pcmax::save_dataset(data_path.string(), data, delim);
    pcmax::write_graph_file(truth_path.string(), dag);
    std::cout << "data_file=" << data_path.string() << "\n";
    std::cout << "truth_file=" << truth_path.string() << "\n";
    std::cout << "edges=" << dag.num_edges() << "\n";
    return kExitOk;
}

struct SearchArgs {
    std::string algorithm = "pc-max";
    std::string test = "fisher-z";
    double alpha = 0.001;
    double penalty = 4.0;
    int max_depth = -1;
    int threads = 1;
    std::string data_file;
    std::string out_file;
    std::string delimiter = "tab";
};

int cmd_search(const SearchArgs& a) {
    std::cout << "config: subcommand=search algorithm=" << a.algorithm << " test=" << a.test
              << " alpha=" << a.alpha << " penalty=" << a.penalty << " max_depth=" << a.max_depth
              << " threads=" << a.threads << " data=" << a.data_file << " out=" << a.out_file
              << " delimiter=" << a.delimiter << "\n";
    pcmax::SearchConfig config;
    config.algorithm = pcmax::algorithm_from_string(a.algorithm);
    config.alpha = a.alpha;
    config.penalty = a.penalty;
    config.max_depth = a.max_depth;
    config.threads = a.threads;
    const pcmax::TestKind kind = pcmax::test_kind_from_string(a.test);

    std::unique_ptr<pcmax::IndependenceTest> test;
    if (looks_like_correlation_file(a.data_file)) {
        if (kind != pcmax::TestKind::FisherZ) {
            throw pcmax::InvalidInputError(
                "a precomputed correlation matrix supports only --test fisher-z");
        }
        test = std::make_unique<pcmax::FisherZTest>(pcmax::load_correlation_file(a.data_file),
                                                    a.alpha);
    } else {
        const pcmax::Dataset data =
            pcmax::load_dataset(a.data_file, delimiter_from_name(a.delimiter));
        switch (kind) {
            case pcmax::TestKind::FisherZ:
                test = std::make_unique<pcmax::FisherZTest>(pcmax::correlation(data), a.alpha);
                break;
            case pcmax::TestKind::BicDiff:
                test = std::make_unique<pcmax::BicDiffTest>(data, a.penalty);
                break;
            case pcmax::TestKind::Oracle:
                throw pcmax::InvalidInputError("--test oracle requires a graph, not a dataset");
        }
    }

    const pcmax::SearchResult result = pcmax::run_search(config, *test);
    pcmax::write_graph_file(a.out_file, result.graph, result.ambiguous);
    std::cout << "out_file=" << a.out_file << "\n";
    std::cout << "edges=" << result.graph.num_edges() << "\n";
    std::cout << "ambiguous_triples=" << result.ambiguous.size() << "\n";
    std::cout << "elapsed_seconds=" << result.elapsed_seconds << "\n";
    return kExitOk;
}

struct BenchmarkArgs {
    int nodes = 1000;
    std::vector<double> avg_degrees = {2.0, 4.0};
    int reps = 10;
    long samples = 1000;
    std::vector<std::string> algorithms = {"pc", "cpc", "pc-stable", "pc-max"};
    std::string test = "fisher-z";
    double alpha = 0.001;
    double penalty = 4.0;
    int max_depth = -1;
    std::uint64_t seed_base = 1;
    int threads = 1;
    std::string out_file;
};

int cmd_benchmark(const BenchmarkArgs& a) {
    pcmax::BenchmarkConfig config;
    config.nodes = a.nodes;
    config.avg_degrees = a.avg_degrees;
    config.reps = a.reps;
    config.samples = a.samples;
    config.algorithms.clear();
    for (const auto& name : a.algorithms) {
        config.algorithms.push_back(pcmax::algorithm_from_string(name));
    }
    config.test = pcmax::test_kind_from_string(a.test);
    config.alpha = a.alpha;
    config.penalty = a.penalty;
    config.max_depth = a.max_depth;
    config.seed_base = a.seed_base;
    config.threads = a.threads;

    std::cout << "config: subcommand=benchmark nodes=" << a.nodes << " reps=" << a.reps
              << " samples=" << a.samples << " test=" << a.test << " alpha=" << a.alpha
              << " penalty=" << a.penalty << " max_depth=" << a.max_depth
              << " seed_base=" << a.seed_base << " threads=" << a.threads << " out=" << a.out_file
              << "\n";

    const auto rows = pcmax::run_benchmark(config, {}, &std::cerr);
    const std::string csv = pcmax::benchmark_csv(config, rows);
    std::ofstream out(a.out_file, std::ios::binary);
    if (!out) throw pcmax::InvalidInputError("cannot write file: " + a.out_file);
    out << csv;
    std::cout << "out_file=" << a.out_file << "\n";
    std::cout << "rows=" << rows.size() << "\n";
    return kExitOk;
}

struct OracleCheckArgs {
    int trials = 200;
    int max_nodes = 10;
    double avg_degree = 3.0;
    std::uint64_t seed = 1;
    int max_depth = -1;
};

int cmd_oracle_check(const OracleCheckArgs& a) {
    std::cout << "config: subcommand=oracle-check trials=" << a.trials
              << " max_nodes=" << a.max_nodes << " avg_degree=" << a.avg_degree
              << " seed=" << a.seed << " max_depth=" << a.max_depth << "\n";
    pcmax::OracleCheckConfig config{a.trials, a.max_nodes, a.avg_degree, a.seed, a.max_depth};
    const pcmax::OracleCheckReport report = pcmax::oracle_check(config, &std::cerr);
    for (const auto& [algorithm, count] : report.exact) {
        std::cout << "exact_" << pcmax::to_string(algorithm) << "=" << count << "/"
                  << report.trials << "\n";
    }
    std::cout << "pcmax_bidirected_edges=" << report.pcmax_bidirected << "\n";
    if (!report.all_exact()) {
        std::cerr << "oracle-check: mismatch detected\n";
        return kExitInternal;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PC-family causal structure learning (PC, CPC, PC-Stable, PC-Max)"};
    app.require_subcommand(1);

    SimulateArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "Generate a random linear-Gaussian SEM dataset");
    sim->add_option("--nodes", sim_args.nodes)->check(CLI::PositiveNumber);
    sim->add_option("--avg-degree", sim_args.avg_degree)->check(CLI::NonNegativeNumber);
    sim->add_option("--samples", sim_args.samples)->check(CLI::PositiveNumber);
    sim->add_option("--graph-seed", sim_args.graph_seed);
    sim->add_option("--param-seed", sim_args.param_seed);
    sim->add_option("--data-seed", sim_args.data_seed);
    sim->add_option("--out", sim_args.out_dir)->required();
    sim->add_option("--delimiter", sim_args.delimiter)->check(CLI::IsMember({"tab", "comma"}));

    SearchArgs search_args;
    auto* search = app.add_subcommand("search", "Run a structure search on a dataset");
    search->add_option("--algorithm", search_args.algorithm)
        ->check(CLI::IsMember({"pc", "cpc", "pc-stable", "pc-max"}));
    search->add_option("--test", search_args.test)->check(CLI::IsMember({"fisher-z", "bic-diff"}));
    search->add_option("--alpha", search_args.alpha);
    search->add_option("--penalty", search_args.penalty);
    search->add_option("--max-depth", search_args.max_depth);
    search->add_option("--threads", search_args.threads)->check(CLI::PositiveNumber);
    search->add_option("--data", search_args.data_file)->required();
    search->add_option("--out", search_args.out_file)->required();
    search->add_option("--delimiter", search_args.delimiter)
        ->check(CLI::IsMember({"tab", "comma"}));

    BenchmarkArgs bench_args;
    auto* bench = app.add_subcommand("benchmark", "Simulate datasets, run algorithms, write CSV");
    bench->add_option("--nodes", bench_args.nodes)->check(CLI::PositiveNumber);
    bench->add_option("--avg-degrees", bench_args.avg_degrees)->delimiter(',');
    bench->add_option("--reps", bench_args.reps)->check(CLI::PositiveNumber);
    bench->add_option("--samples", bench_args.samples)->check(CLI::PositiveNumber);
    bench->add_option("--algorithms", bench_args.algorithms)->delimiter(',');
    bench->add_option("--test", bench_args.test)->check(CLI::IsMember({"fisher-z", "bic-diff"}));
    bench->add_option("--alpha", bench_args.alpha);
    bench->add_option("--penalty", bench_args.penalty);
    bench->add_option("--max-depth", bench_args.max_depth);
    bench->add_option("--seed-base", bench_args.seed_base);
    bench->add_option("--threads", bench_args.threads)->check(CLI::PositiveNumber);
    bench->add_option("--out", bench_args.out_file)->required();

    OracleCheckArgs oracle_args;
    auto* oracle = app.add_subcommand("oracle-check",
                                      "Verify exact pattern recovery under the d-separation oracle");
    oracle->add_option("--trials", oracle_args.trials)->check(CLI::PositiveNumber);
    oracle->add_option("--max-nodes", oracle_args.max_nodes)->check(CLI::PositiveNumber);
    oracle->add_option("--avg-degree", oracle_args.avg_degree)->check(CLI::NonNegativeNumber);
    oracle->add_option("--seed", oracle_args.seed);
    oracle->add_option("--max-depth", oracle_args.max_depth);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_args);
        if (search->parsed()) return cmd_search(search_args);
        if (bench->parsed()) return cmd_benchmark(bench_args);
        if (oracle->parsed()) return cmd_oracle_check(oracle_args);
        return kExitUsage;
    } catch (const pcmax::InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const pcmax::InvalidInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const pcmax::DegenerateDataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
