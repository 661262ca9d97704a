#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pcmax/graph.hpp"
#include "pcmax/indep.hpp"

namespace pcmax {

enum class Algorithm { Pc, Cpc, PcStable, PcMax };
enum class TestKind { FisherZ, BicDiff, Oracle };

Algorithm algorithm_from_string(const std::string& s);
std::string to_string(Algorithm a);
TestKind test_kind_from_string(const std::string& s);
std::string to_string(TestKind t);

struct SearchConfig {
    Algorithm algorithm = Algorithm::PcMax;
    double alpha = 0.001;
    double penalty = 4.0;
    int max_depth = -1;  // < 0 means unlimited
    int threads = 1;
};

struct FasResult {
    MixedGraph graph;
    SepsetMap sepsets;
};

/// Classic adjacency search (Fig-2 style): starting from the complete
/// graph, remove an edge as soon as some size-m subset of either
/// endpoint's neighborhood tests independent, recording it in the sepset
/// map. Removals apply immediately, so the result depends on node order.
FasResult fas(const IndependenceTest& test, int max_depth = -1, bool record_sepsets = true);

/// Depth-stable adjacency search: within each depth every test consults
/// the adjacency sets frozen at the end of the previous depth and removals
/// apply only at the depth barrier. Order-independent; the per-edge work
/// inside a depth may be spread across threads with bit-identical results.
FasResult fas_stable(const IndependenceTest& test, int max_depth = -1, int threads = 1,
                     bool record_sepsets = true);

/// Orient every unshielded triple (x,y,z) with y not in sepsets(x,z) as a
/// collider, unconditionally (bidirected edges possible).
void orient_colliders_sepset(MixedGraph& g, const SepsetMap& sepsets);

enum class TripleClass { Collider, Noncollider, Ambiguous };

/// Conservative classification: collect every subset of adj(x)\{z} and
/// adj(z)\{x} that tests independent; Collider if y is in none of them,
/// Noncollider if in all, Ambiguous otherwise (or if none test independent).
TripleClass classify_triple_cpc(const MixedGraph& g, const IndependenceTest& test,
                                const Triple& t, int max_depth = -1);

struct MaxPResult {
    std::vector<int> sepset;
    double p_value;
};

/// The subset of adj(x)\{z} or adj(z)\{x} with the maximum test p-value.
/// Ties break to the smaller set, then lexicographic node order.
std::optional<MaxPResult> max_p_sepset(const MixedGraph& g, const IndependenceTest& test,
                                       int x, int z, int max_depth = -1);

struct ColliderRecord {
    Triple triple;
    double p_value;
    std::vector<int> sepset;
};

/// Max-p collider orientation: per-triple max-p sepsets (parallelizable),
/// records sorted by p-value descending (triple order breaks ties), then
/// applied serially, skipping any orientation that would create a
/// bidirected edge. The output graph has no bidirected edge.
std::vector<ColliderRecord> orient_colliders_maxp(MixedGraph& g, const IndependenceTest& test,
                                                  int max_depth = -1, int threads = 1);

struct SearchResult {
    MixedGraph graph;
    std::set<Triple> ambiguous;      // CPC only
    SepsetMap sepsets;               // PC / PC-Stable only
    double elapsed_seconds = 0.0;
};

/// PC        = fas        + sepset colliders + Meek closure
/// CPC       = fas        + conservative classification + Meek (ambiguity-aware)
/// PC-Stable = fas_stable + sepset colliders + Meek closure
/// PC-Max    = fas_stable + max-p colliders  + Meek closure
SearchResult run_search(const SearchConfig& config, const IndependenceTest& test);

}  // namespace pcmax
