#include "pcmax/sim.hpp"

#include <cmath>
#include <random>
#include <unordered_set>

#include "pcmax/errors.hpp"

namespace pcmax {

namespace {

std::uint64_t edge_key(int parent, int child) {
    return (static_cast<std::uint64_t>(parent) << 32) | static_cast<std::uint32_t>(child);
}

std::vector<std::string> default_names(int n) {
    std::vector<std::string> names;
    names.reserve(n);
    for (int i = 1; i <= n; ++i) names.push_back("X" + std::to_string(i));
    return names;
}

}  // namespace

double SemModel::coefficient(int parent, int child) const {
    const auto it = coefficients.find(edge_key(parent, child));
    if (it == coefficients.end()) {
        throw InvalidInputError("no coefficient for edge " + dag.name(parent) + " -> " +
                                dag.name(child));
    }
    return it->second;
}

MixedGraph random_dag(const RandomGraphConfig& config) {
    const int n = config.num_nodes;
    if (n <= 0) throw InvalidInputError("num_nodes must be positive");
    if (config.avg_degree < 0.0) throw InvalidInputError("avg_degree must be non-negative");
    const std::uint64_t total_pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    const std::uint64_t m =
        static_cast<std::uint64_t>(std::llround(config.avg_degree * n / 2.0));
    if (m > total_pairs) {
        throw InvalidInputError("avg_degree " + std::to_string(config.avg_degree) +
                                " implies more edges than pairs available");
    }

    MixedGraph g(default_names(n));
    std::mt19937_64 rng(config.seed);
    std::uniform_int_distribution<std::uint64_t> pick(0, total_pairs - (total_pairs ? 1 : 0));
    std::unordered_set<std::uint64_t> chosen;
    while (chosen.size() < m) {
        const std::uint64_t k = pick(rng);
        if (!chosen.insert(k).second) continue;
        // Decode pair index k to (i, j) with i < j, row-major over i.
        std::uint64_t remaining = k;
        int i = 0;
        while (remaining >= static_cast<std::uint64_t>(n - 1 - i)) {
            remaining -= n - 1 - i;
            ++i;
        }
        const int j = i + 1 + static_cast<int>(remaining);
        g.add_directed(i, j);
    }
    return g;
}

SemModel parameterize(const MixedGraph& dag, std::uint64_t seed) {
    topological_order(dag);  // validates the input is a DAG
    SemModel model{dag, {}, {}};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> magnitude(0.4, 1.2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> variance(1.0, 2.0);
    for (const Edge& e : dag.edges()) {
        const int parent = dag.is_directed(e.a, e.b) ? e.a : e.b;
        const int child = parent == e.a ? e.b : e.a;
        const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
        model.coefficients[edge_key(parent, child)] = sign * magnitude(rng);
    }
    model.error_variances.resize(dag.num_nodes());
    for (int v = 0; v < dag.num_nodes(); ++v) model.error_variances[v] = variance(rng);
    return model;
}

Dataset simulate(const SemModel& model, long n, std::uint64_t seed) {
    if (n < 2) throw InvalidInputError("need at least 2 samples");
    const std::vector<int> order = topological_order(model.dag);
    const int p = model.dag.num_nodes();

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Dataset d;
    d.variables = model.dag.names();
    d.values.resize(n, p);
    // Noise drawn row-major in node order, independent of topology, so the
    // draw sequence is a pure function of (n, p, seed).
    for (long i = 0; i < n; ++i) {
        for (int v = 0; v < p; ++v) {
            d.values(i, v) = gauss(rng) * std::sqrt(model.error_variances[v]);
        }
    }
    for (int v : order) {
        const auto parents = model.dag.parents(v);
        for (int parent : parents) {
            const double b = model.coefficient(parent, v);
            d.values.col(v) += b * d.values.col(parent);
        }
    }
    return d;
}

}  // namespace pcmax
