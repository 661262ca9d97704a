#include "pcmax/graph.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "pcmax/errors.hpp"

namespace pcmax {

namespace {

void insert_sorted(std::vector<int>& v, int x) {
    v.insert(std::lower_bound(v.begin(), v.end(), x), x);
}

void erase_sorted(std::vector<int>& v, int x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it != v.end() && *it == x) v.erase(it);
}

}  // namespace

MixedGraph::MixedGraph(std::vector<std::string> names) : names_(std::move(names)) {
    std::unordered_set<std::string> seen;
    for (const auto& n : names_) {
        if (!seen.insert(n).second) {
            throw InvalidInputError("duplicate node name: " + n);
        }
    }
    adj_.resize(names_.size());
}

MixedGraph MixedGraph::complete(std::vector<std::string> names) {
    MixedGraph g(std::move(names));
    const int n = g.num_nodes();
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) g.add_undirected(a, b);
    }
    return g;
}

std::uint64_t MixedGraph::key(int a, int b) {
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

int MixedGraph::index_of(const std::string& name) const {
    for (int i = 0; i < num_nodes(); ++i) {
        if (names_[i] == name) return i;
    }
    return -1;
}

bool MixedGraph::is_adjacent(int a, int b) const {
    if (a > b) std::swap(a, b);
    return marks_.contains(key(a, b));
}

void MixedGraph::add_edge(int a, int b, Endpoint at_a, Endpoint at_b) {
    if (a == b) throw InvalidInputError("self-loop on node " + names_[a]);
    if (a > b) {
        std::swap(a, b);
        std::swap(at_a, at_b);
    }
    auto [it, inserted] = marks_.try_emplace(key(a, b), at_a, at_b);
    if (!inserted) throw InvalidInputError("edge already exists: " + names_[a] + ", " + names_[b]);
    insert_sorted(adj_[a], b);
    insert_sorted(adj_[b], a);
}

void MixedGraph::remove_edge(int a, int b) {
    if (a > b) std::swap(a, b);
    if (marks_.erase(key(a, b)) == 0) {
        throw InvalidInputError("no edge to remove: " + names_[a] + ", " + names_[b]);
    }
    erase_sorted(adj_[a], b);
    erase_sorted(adj_[b], a);
}

Endpoint MixedGraph::endpoint(int other, int at) const {
    const bool flip = other > at;
    const auto it = marks_.find(flip ? key(at, other) : key(other, at));
    if (it == marks_.end()) {
        throw InvalidInputError("no edge: " + names_[other] + ", " + names_[at]);
    }
    return flip ? it->second.first : it->second.second;
}

void MixedGraph::set_endpoint(int other, int at, Endpoint e) {
    const bool flip = other > at;
    const auto it = marks_.find(flip ? key(at, other) : key(other, at));
    if (it == marks_.end()) {
        throw InvalidInputError("no edge: " + names_[other] + ", " + names_[at]);
    }
    (flip ? it->second.first : it->second.second) = e;
}

bool MixedGraph::has_arrow_at(int other, int at) const {
    return is_adjacent(other, at) && endpoint(other, at) == Endpoint::Arrow;
}

bool MixedGraph::is_undirected(int a, int b) const {
    return is_adjacent(a, b) && endpoint(a, b) == Endpoint::Tail && endpoint(b, a) == Endpoint::Tail;
}

bool MixedGraph::is_directed(int from, int to) const {
    return is_adjacent(from, to) && endpoint(to, from) == Endpoint::Tail &&
           endpoint(from, to) == Endpoint::Arrow;
}

bool MixedGraph::is_bidirected(int a, int b) const {
    return is_adjacent(a, b) && endpoint(a, b) == Endpoint::Arrow && endpoint(b, a) == Endpoint::Arrow;
}

std::vector<Edge> MixedGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(marks_.size());
    for (const auto& [k, m] : marks_) {
        out.push_back(Edge{static_cast<int>(k >> 32), static_cast<int>(k & 0xffffffffu),
                           m.first, m.second});
    }
    std::sort(out.begin(), out.end(), [](const Edge& l, const Edge& r) {
        return std::pair(l.a, l.b) < std::pair(r.a, r.b);
    });
    return out;
}

std::vector<int> MixedGraph::parents(int v) const {
    std::vector<int> out;
    for (int u : adj_[v]) {
        if (is_directed(u, v)) out.push_back(u);
    }
    return out;
}

bool MixedGraph::operator==(const MixedGraph& other) const {
    return names_ == other.names_ && marks_ == other.marks_;
}

void SepsetMap::set(int a, int b, std::vector<int> sepset) {
    if (a > b) std::swap(a, b);
    std::sort(sepset.begin(), sepset.end());
    map_[(static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b)] = std::move(sepset);
}

const std::vector<int>* SepsetMap::get(int a, int b) const {
    if (a > b) std::swap(a, b);
    const auto it = map_.find((static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b));
    return it == map_.end() ? nullptr : &it->second;
}

std::vector<Triple> unshielded_triples(const MixedGraph& g) {
    std::vector<Triple> out;
    for (int y = 0; y < g.num_nodes(); ++y) {
        const auto& nbrs = g.adjacents(y);
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
                if (!g.is_adjacent(nbrs[i], nbrs[j])) {
                    out.push_back(Triple{nbrs[i], y, nbrs[j]});
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool would_create_bidirected(const MixedGraph& g, const Triple& t) {
    if (!g.is_adjacent(t.x, t.y) || !g.is_adjacent(t.z, t.y)) {
        throw InvalidInputError("triple edges missing");
    }
    return g.endpoint(t.y, t.x) == Endpoint::Arrow || g.endpoint(t.y, t.z) == Endpoint::Arrow;
}

void orient_collider(MixedGraph& g, const Triple& t) {
    if (g.is_adjacent(t.x, t.z)) throw InvalidInputError("triple is shielded");
    g.set_endpoint(t.x, t.y, Endpoint::Arrow);
    g.set_endpoint(t.z, t.y, Endpoint::Arrow);
}

namespace {

// Directed path from -> ... -> to over fully directed edges.
bool has_directed_path(const MixedGraph& g, int from, int to) {
    std::vector<char> seen(g.num_nodes(), 0);
    std::deque<int> queue{from};
    seen[from] = 1;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        if (v == to) return true;
        for (int w : g.adjacents(v)) {
            if (!seen[w] && g.is_directed(v, w)) {
                seen[w] = 1;
                queue.push_back(w);
            }
        }
    }
    return false;
}

// Orient from -> to unless doing so would create a new unshielded collider
// or a directed cycle. Returns true if the edge was oriented.
bool direct_edge_guarded(MixedGraph& g, int from, int to) {
    if (!g.is_undirected(from, to)) return false;
    for (int w : g.adjacents(to)) {
        if (w != from && g.has_arrow_at(w, to) && !g.is_adjacent(w, from)) return false;
    }
    if (has_directed_path(g, to, from)) return false;
    g.set_endpoint(from, to, Endpoint::Arrow);
    return true;
}

bool is_ambiguous(const std::set<Triple>& ambiguous, int x, int y, int z) {
    return ambiguous.contains(Triple::canonical(x, y, z));
}

// R1: a -> b, b -- c, a and c nonadjacent, (a,b,c) not ambiguous  =>  b -> c.
bool meek_r1(MixedGraph& g, const std::set<Triple>& ambiguous) {
    bool changed = false;
    for (int b = 0; b < g.num_nodes(); ++b) {
        for (int a : g.adjacents(b)) {
            if (!g.is_directed(a, b)) continue;
            for (int c : std::vector<int>(g.adjacents(b))) {
                if (c == a || g.is_adjacent(a, c)) continue;
                if (is_ambiguous(ambiguous, a, b, c)) continue;
                changed |= direct_edge_guarded(g, b, c);
            }
        }
    }
    return changed;
}

// R2: a -> b -> c, a -- c  =>  a -> c.
bool meek_r2(MixedGraph& g) {
    bool changed = false;
    for (int a = 0; a < g.num_nodes(); ++a) {
        for (int c : std::vector<int>(g.adjacents(a))) {
            if (!g.is_undirected(a, c)) continue;
            for (int b : g.adjacents(a)) {
                if (g.is_directed(a, b) && g.is_directed(b, c)) {
                    changed |= direct_edge_guarded(g, a, c);
                    break;
                }
            }
        }
    }
    return changed;
}

// R3: a -- b, a -- c, a -- d, c -> b, d -> b, c and d nonadjacent,
// (c,a,d) not ambiguous  =>  a -> b.
bool meek_r3(MixedGraph& g, const std::set<Triple>& ambiguous) {
    bool changed = false;
    for (int a = 0; a < g.num_nodes(); ++a) {
        for (int b : std::vector<int>(g.adjacents(a))) {
            if (!g.is_undirected(a, b)) continue;
            const auto& nbrs = g.adjacents(a);
            bool fired = false;
            for (std::size_t i = 0; i < nbrs.size() && !fired; ++i) {
                const int c = nbrs[i];
                if (c == b || !g.is_undirected(a, c) || !g.is_directed(c, b)) continue;
                for (std::size_t j = i + 1; j < nbrs.size() && !fired; ++j) {
                    const int d = nbrs[j];
                    if (d == b || !g.is_undirected(a, d) || !g.is_directed(d, b)) continue;
                    if (g.is_adjacent(c, d)) continue;
                    if (is_ambiguous(ambiguous, c, a, d)) continue;
                    fired = direct_edge_guarded(g, a, b);
                }
            }
            changed |= fired;
        }
    }
    return changed;
}

// R4: a -- b, a -- d, d -> c, c -> b, b and d nonadjacent,
// (b,a,d) not ambiguous  =>  a -> b.
bool meek_r4(MixedGraph& g, const std::set<Triple>& ambiguous) {
    bool changed = false;
    for (int a = 0; a < g.num_nodes(); ++a) {
        for (int b : std::vector<int>(g.adjacents(a))) {
            if (!g.is_undirected(a, b)) continue;
            bool fired = false;
            for (int d : g.adjacents(a)) {
                if (fired) break;
                if (d == b || !g.is_undirected(a, d) || g.is_adjacent(b, d)) continue;
                if (is_ambiguous(ambiguous, b, a, d)) continue;
                for (int c : g.adjacents(b)) {
                    if (c != a && g.is_directed(c, b) && g.is_directed(d, c)) {
                        fired = direct_edge_guarded(g, a, b);
                        break;
                    }
                }
            }
            changed |= fired;
        }
    }
    return changed;
}

void validate_dag(const MixedGraph& g, const char* what) {
    for (const Edge& e : g.edges()) {
        if (!(g.is_directed(e.a, e.b) || g.is_directed(e.b, e.a))) {
            throw InvalidInputError(std::string(what) + ": graph has a non-directed edge");
        }
    }
    if (has_directed_cycle(g)) {
        throw InvalidInputError(std::string(what) + ": graph has a directed cycle");
    }
}

}  // namespace

void meek_closure(MixedGraph& g, const std::set<Triple>& ambiguous) {
    bool changed = true;
    while (changed) {
        changed = false;
        changed |= meek_r1(g, ambiguous);
        changed |= meek_r2(g);
        changed |= meek_r3(g, ambiguous);
        changed |= meek_r4(g, ambiguous);
    }
}

MixedGraph dag_to_cpdag(const MixedGraph& dag) {
    validate_dag(dag, "dag_to_cpdag");
    MixedGraph pattern(dag.names());
    for (const Edge& e : dag.edges()) pattern.add_undirected(e.a, e.b);
    for (const Triple& t : unshielded_triples(dag)) {
        if (dag.is_directed(t.x, t.y) && dag.is_directed(t.z, t.y)) {
            orient_collider(pattern, t);
        }
    }
    meek_closure(pattern);
    return pattern;
}

bool d_separated(const MixedGraph& dag, int x, int y, std::span<const int> s) {
    validate_dag(dag, "d_separated");
    if (x == y) throw InvalidInputError("d_separated: x == y");
    std::vector<char> in_s(dag.num_nodes(), 0);
    for (int v : s) {
        if (v == x || v == y) throw InvalidInputError("d_separated: endpoint in conditioning set");
        in_s[v] = 1;
    }

    // Nodes with themselves or a descendant in s.
    std::vector<char> anc_of_s(dag.num_nodes(), 0);
    {
        std::deque<int> queue;
        for (int v = 0; v < dag.num_nodes(); ++v) {
            if (in_s[v]) {
                anc_of_s[v] = 1;
                queue.push_back(v);
            }
        }
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            for (int p : dag.parents(v)) {
                if (!anc_of_s[p]) {
                    anc_of_s[p] = 1;
                    queue.push_back(p);
                }
            }
        }
    }

    // Reachability over open paths: state (node, arrived-from-parent?).
    std::vector<std::array<char, 2>> seen(dag.num_nodes(), {0, 0});
    std::deque<std::pair<int, bool>> queue;
    queue.emplace_back(x, false);
    seen[x][0] = 1;
    while (!queue.empty()) {
        const auto [v, from_parent] = queue.front();
        queue.pop_front();
        if (v == y) return false;
        const auto visit = [&](int w, bool fp) {
            if (!seen[w][fp ? 1 : 0]) {
                seen[w][fp ? 1 : 0] = 1;
                queue.emplace_back(w, fp);
            }
        };
        if (!from_parent) {
            // Arrived from a child (or start): pass through unless conditioned.
            if (in_s[v]) continue;
            for (int w : dag.adjacents(v)) {
                visit(w, dag.is_directed(v, w));
            }
        } else {
            // Arrived from a parent: v is a collider on parent->v<-parent
            // continuations, open only if v has self-or-descendant in s.
            if (!in_s[v]) {
                for (int w : dag.adjacents(v)) {
                    if (dag.is_directed(v, w)) visit(w, true);
                }
            }
            if (anc_of_s[v]) {
                for (int w : dag.adjacents(v)) {
                    if (dag.is_directed(w, v)) visit(w, false);
                }
            }
        }
    }
    return true;
}

bool has_directed_cycle(const MixedGraph& g) {
    // Iterative DFS with colors over directed edges only.
    enum : char { White, Gray, Black };
    std::vector<char> color(g.num_nodes(), White);
    std::vector<std::pair<int, std::size_t>> stack;
    for (int start = 0; start < g.num_nodes(); ++start) {
        if (color[start] != White) continue;
        stack.emplace_back(start, 0);
        color[start] = Gray;
        while (!stack.empty()) {
            auto& [v, i] = stack.back();
            const auto& nbrs = g.adjacents(v);
            bool advanced = false;
            while (i < nbrs.size()) {
                const int w = nbrs[i++];
                if (!g.is_directed(v, w)) continue;
                if (color[w] == Gray) return true;
                if (color[w] == White) {
                    color[w] = Gray;
                    stack.emplace_back(w, 0);
                    advanced = true;
                    break;
                }
            }
            if (!advanced && (stack.empty() || stack.back().first == v)) {
                color[v] = Black;
                stack.pop_back();
            }
        }
    }
    return false;
}

std::vector<int> topological_order(const MixedGraph& dag) {
    validate_dag(dag, "topological_order");
    std::vector<int> indeg(dag.num_nodes(), 0);
    for (int v = 0; v < dag.num_nodes(); ++v) {
        indeg[v] = static_cast<int>(dag.parents(v).size());
    }
    std::deque<int> queue;
    for (int v = 0; v < dag.num_nodes(); ++v) {
        if (indeg[v] == 0) queue.push_back(v);
    }
    std::vector<int> order;
    order.reserve(dag.num_nodes());
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        order.push_back(v);
        for (int w : dag.adjacents(v)) {
            if (dag.is_directed(v, w) && --indeg[w] == 0) queue.push_back(w);
        }
    }
    return order;
}

}  // namespace pcmax
