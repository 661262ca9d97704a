#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "pcmax/dataset.hpp"
#include "pcmax/graph.hpp"

namespace pcmax {

struct RandomGraphConfig {
    int num_nodes = 0;
    double avg_degree = 0.0;
    std::uint64_t seed = 0;
};

/// Linear Gaussian structural equation model over a DAG: every directed
/// edge carries a nonzero coefficient, every node a positive error variance.
struct SemModel {
    MixedGraph dag;
    // keyed by (parent << 32) | child
    std::unordered_map<std::uint64_t, double> coefficients;
    std::vector<double> error_variances;

    double coefficient(int parent, int child) const;
};

/// Random DAG built by fixing the node order 0..n-1 and sampling exactly
/// round(avg_degree * n / 2) distinct forward pairs i < j as edges i -> j.
/// Acyclic by construction, deterministic given the seed.
MixedGraph random_dag(const RandomGraphConfig& config);

/// Edge coefficients uniform on +-[0.2, 0.9] (sign uniform), error
/// variances uniform on [1.0, 2.0]. Deterministic given the seed.
SemModel parameterize(const MixedGraph& dag, std::uint64_t seed);

/// n i.i.d. cases, each node in topological order set to the coefficient-
/// weighted sum of its parents plus Gaussian noise. For a DAG this forward
/// pass is the exact fixed point of the linear system.
Dataset simulate(const SemModel& model, long n, std::uint64_t seed);

}  // namespace pcmax
