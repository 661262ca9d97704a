#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "pcmax/dataset.hpp"
#include "pcmax/metrics.hpp"
#include "pcmax/search.hpp"
#include "pcmax/sim.hpp"

namespace pcmax {

/// One benchmark sweep: for each average degree, generate `reps` datasets
/// from random linear-Gaussian SEMs, run every requested algorithm on each,
/// and score against the pattern of the true DAG.
struct BenchmarkConfig {
    int nodes = 1000;
    std::vector<double> avg_degrees = {2.0, 4.0};
    int reps = 10;
    long samples = 1000;
    std::vector<Algorithm> algorithms = {Algorithm::Pc, Algorithm::Cpc, Algorithm::PcStable,
                                         Algorithm::PcMax};
    TestKind test = TestKind::FisherZ;
    double alpha = 0.001;
    double penalty = 4.0;
    int max_depth = -1;
    std::uint64_t seed_base = 1;
    int threads = 1;
};

struct BenchmarkRow {
    Algorithm algorithm;
    double avg_degree;
    int run;  // 1-based
    MetricsRecord metrics;
    std::size_t ambiguous_count = 0;
    std::size_t unshielded_count = 0;
};

/// Seeds for one (degree index, run) cell: graph, parameter, and data
/// streams are independent so a row can be regenerated from the CSV header.
struct CellSeeds {
    std::uint64_t graph, param, data;
};
CellSeeds benchmark_seeds(std::uint64_t seed_base, int degree_index, int run);

/// Called after each completed (dataset, algorithm) cell.
using BenchmarkObserver =
    std::function<void(const BenchmarkRow&, const SearchResult&, const MixedGraph& true_pattern,
                       const Dataset& data)>;

std::vector<BenchmarkRow> run_benchmark(const BenchmarkConfig& config,
                                        const BenchmarkObserver& observer = {},
                                        std::ostream* progress = nullptr);

/// CSV with header comment (seeds), one row per run, and a MEAN row per
/// (algorithm, degree) that averages each column over its defined entries.
std::string benchmark_csv(const BenchmarkConfig& config, const std::vector<BenchmarkRow>& rows);

struct OracleCheckConfig {
    int trials = 200;
    int max_nodes = 10;
    double avg_degree = 3.0;
    std::uint64_t seed = 1;
    int max_depth = -1;
};

struct OracleCheckReport {
    int trials = 0;
    // exact CPDAG recoveries per algorithm; CPC additionally requires an
    // empty ambiguous set to count as exact
    std::map<Algorithm, int> exact;
    long pcmax_bidirected = 0;
    bool all_exact() const;
};

/// Runs all four algorithms with the d-separation oracle on random DAGs
/// and counts exact pattern recoveries.
OracleCheckReport oracle_check(const OracleCheckConfig& config, std::ostream* progress = nullptr);

}  // namespace pcmax
