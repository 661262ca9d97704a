#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace pcmax {

enum class Endpoint : std::uint8_t { Tail, Arrow };

/// One edge in canonical storage order (a < b). Undirected = Tail/Tail,
/// directed = exactly one Arrow, bidirected = Arrow/Arrow.
struct Edge {
    int a;
    int b;
    Endpoint at_a;
    Endpoint at_b;

    bool operator==(const Edge&) const = default;
};

/// An ordered triple x-y-z, canonicalized so that x < z. (x,y,z) and
/// (z,y,x) denote the same triple.
struct Triple {
    int x;
    int y;
    int z;

    static Triple canonical(int x, int y, int z) {
        return x < z ? Triple{x, y, z} : Triple{z, y, x};
    }
    bool operator==(const Triple&) const = default;
    auto operator<=>(const Triple&) const = default;
};

/// Graph with per-edge endpoint marks (tail/arrow). Represents skeletons,
/// DAGs, and patterns in one type. At most one edge per node pair, no
/// self-loops; adjacency queries are symmetric.
class MixedGraph {
public:
    explicit MixedGraph(std::vector<std::string> names);

    /// Undirected edge between every pair of nodes.
    static MixedGraph complete(std::vector<std::string> names);

    int num_nodes() const { return static_cast<int>(names_.size()); }
    std::size_t num_edges() const { return marks_.size(); }
    const std::string& name(int v) const { return names_[v]; }
    const std::vector<std::string>& names() const { return names_; }
    /// Index of a node name, or -1 if absent.
    int index_of(const std::string& name) const;

    bool is_adjacent(int a, int b) const;
    /// Sorted neighbor list.
    const std::vector<int>& adjacents(int v) const { return adj_[v]; }
    int degree(int v) const { return static_cast<int>(adj_[v].size()); }

    void add_edge(int a, int b, Endpoint at_a, Endpoint at_b);
    void add_undirected(int a, int b) { add_edge(a, b, Endpoint::Tail, Endpoint::Tail); }
    void add_directed(int from, int to) { add_edge(from, to, Endpoint::Tail, Endpoint::Arrow); }
    void remove_edge(int a, int b);

    /// The mark at `at` on the edge between `other` and `at`.
    Endpoint endpoint(int other, int at) const;
    /// Set the mark at `at` on the existing edge between `other` and `at`.
    void set_endpoint(int other, int at, Endpoint e);

    /// True iff the edge other-at exists and carries an Arrow at `at`.
    bool has_arrow_at(int other, int at) const;
    bool is_undirected(int a, int b) const;
    /// Tail at `from`, arrow at `to`.
    bool is_directed(int from, int to) const;
    bool is_bidirected(int a, int b) const;

    /// All edges in canonical order, sorted by (a, b).
    std::vector<Edge> edges() const;
    /// Parents of v: nodes u with u -> v (tail at u, arrow at v).
    std::vector<int> parents(int v) const;

    /// Same node names, same edges, same marks.
    bool operator==(const MixedGraph& other) const;

private:
    static std::uint64_t key(int a, int b);

    std::vector<std::string> names_;
    std::vector<std::vector<int>> adj_;
    // keyed by (min, max); value marks are (at min, at max)
    std::unordered_map<std::uint64_t, std::pair<Endpoint, Endpoint>> marks_;
};

/// Mapping from unordered node pairs to the conditioning set that removed
/// their edge during adjacency search. Entries never contain either endpoint.
class SepsetMap {
public:
    void set(int a, int b, std::vector<int> sepset);
    /// nullptr if no entry.
    const std::vector<int>* get(int a, int b) const;
    std::size_t size() const { return map_.size(); }

private:
    std::unordered_map<std::uint64_t, std::vector<int>> map_;
};

/// Every canonical triple (x,y,z) with x-y and y-z adjacent and x,z not
/// adjacent, sorted by (x, y, z).
std::vector<Triple> unshielded_triples(const MixedGraph& g);

/// True iff orienting x -> y <- z would put an arrow opposite an existing
/// arrow: edge x-y already has an arrow at x, or edge z-y an arrow at z.
bool would_create_bidirected(const MixedGraph& g, const Triple& t);

/// Place arrows at y on edges x-y and z-y; marks at x and z are untouched.
void orient_collider(MixedGraph& g, const Triple& t);

/// Meek rules R1-R4 to fixpoint. Never orients through a triple in
/// `ambiguous` where the rule needs it to be a definite noncollider, never
/// retracts an arrow, never creates a new unshielded collider or a
/// directed cycle.
void meek_closure(MixedGraph& g, const std::set<Triple>& ambiguous = {});

/// Pattern (CPDAG) of a DAG: skeleton plus v-structures, closed under the
/// Meek rules, all other edges undirected.
MixedGraph dag_to_cpdag(const MixedGraph& dag);

/// Standard d-separation of x and y given s in a DAG.
bool d_separated(const MixedGraph& dag, int x, int y, std::span<const int> s);

/// True iff following fully directed edges only yields a cycle.
bool has_directed_cycle(const MixedGraph& g);

/// Topological order over directed edges; throws InvalidInputError on a cycle.
std::vector<int> topological_order(const MixedGraph& dag);

}  // namespace pcmax
