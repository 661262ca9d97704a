#include "pcmax/search.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <numeric>
#include <thread>

#include "pcmax/errors.hpp"

namespace pcmax {

Algorithm algorithm_from_string(const std::string& s) {
    if (s == "pc") return Algorithm::Pc;
    if (s == "cpc") return Algorithm::Cpc;
    if (s == "pc-stable") return Algorithm::PcStable;
    if (s == "pc-max") return Algorithm::PcMax;
    throw InvalidInputError("unknown algorithm: " + s);
}

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::Pc: return "pc";
        case Algorithm::Cpc: return "cpc";
        case Algorithm::PcStable: return "pc-stable";
        case Algorithm::PcMax: return "pc-max";
    }
    throw InternalError("bad algorithm enum");
}

TestKind test_kind_from_string(const std::string& s) {
    if (s == "fisher-z") return TestKind::FisherZ;
    if (s == "bic-diff") return TestKind::BicDiff;
    if (s == "oracle") return TestKind::Oracle;
    throw InvalidInputError("unknown test: " + s);
}

std::string to_string(TestKind t) {
    switch (t) {
        case TestKind::FisherZ: return "fisher-z";
        case TestKind::BicDiff: return "bic-diff";
        case TestKind::Oracle: return "oracle";
    }
    throw InternalError("bad test enum");
}

namespace {

// Calls fn with every size-k subset of the sorted pool, in lexicographic
// order. fn returns true to stop early; the return value says whether it did.
template <class Fn>
bool for_each_combination(const std::vector<int>& pool, int k, Fn&& fn) {
    const int n = static_cast<int>(pool.size());
    if (k > n) return false;
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<int> subset(k);
    while (true) {
        for (int i = 0; i < k; ++i) subset[i] = pool[idx[i]];
        if (fn(subset)) return true;
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return false;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

std::vector<int> pool_without(const std::vector<int>& nbrs, int excluded) {
    std::vector<int> out;
    out.reserve(nbrs.size());
    for (int v : nbrs) {
        if (v != excluded) out.push_back(v);
    }
    return out;
}

// Static contiguous partition over [0, count); deterministic regardless of
// the number of workers because chunks share no mutable state.
void parallel_chunks(std::size_t count, int threads,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
    const std::size_t workers =
        std::min<std::size_t>(std::max(threads, 1), count == 0 ? 1 : count);
    if (workers <= 1) {
        fn(0, count);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        pool.emplace_back([&, w, begin, end] {
            try {
                if (begin < end) fn(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

// First size-m subset of adj(x)\{y} or adj(y)\{x} that tests independent.
std::optional<std::vector<int>> find_sepset_at_depth(const std::vector<std::vector<int>>& adj,
                                                     const IndependenceTest& test, int x, int y,
                                                     int m) {
    std::optional<std::vector<int>> found;
    const auto search_pool = [&](const std::vector<int>& pool) {
        return for_each_combination(pool, m, [&](const std::vector<int>& subset) {
            if (test.test(x, y, subset).independent) {
                found = subset;
                return true;
            }
            return false;
        });
    };
    const std::vector<int> pool_x = pool_without(adj[x], y);
    if (search_pool(pool_x)) return found;
    const std::vector<int> pool_y = pool_without(adj[y], x);
    if (pool_y != pool_x) search_pool(pool_y);
    return found;
}

bool depth_reachable(const std::vector<std::vector<int>>& adj, int m) {
    for (std::size_t x = 0; x < adj.size(); ++x) {
        if (static_cast<int>(adj[x].size()) - 1 >= m && !adj[x].empty()) return true;
    }
    return false;
}

MixedGraph graph_from_adjacency(const std::vector<std::string>& names,
                                const std::vector<std::vector<int>>& adj) {
    MixedGraph g(names);
    for (std::size_t x = 0; x < adj.size(); ++x) {
        for (int y : adj[x]) {
            if (static_cast<int>(x) < y) g.add_undirected(static_cast<int>(x), y);
        }
    }
    return g;
}

// Depth-0 pass shared by both searches: with an empty conditioning set
// there is no adjacency to consult and no order effect.
void fas_depth_zero(const IndependenceTest& test, int threads, bool record_sepsets,
                    std::vector<std::vector<int>>& adj, SepsetMap& sepsets) {
    const int n = test.num_vars();
    const std::size_t num_pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
    std::vector<char> independent(num_pairs, 0);
    parallel_chunks(num_pairs, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            // Decode pair index (row-major over x < y).
            std::size_t rem = k;
            int x = 0;
            while (rem >= static_cast<std::size_t>(n - 1 - x)) {
                rem -= n - 1 - x;
                ++x;
            }
            const int y = x + 1 + static_cast<int>(rem);
            independent[k] = test.test(x, y, {}).independent ? 1 : 0;
        }
    });
    std::size_t k = 0;
    for (int x = 0; x < n; ++x) {
        for (int y = x + 1; y < n; ++y, ++k) {
            if (independent[k]) {
                if (record_sepsets) sepsets.set(x, y, {});
            } else {
                adj[x].push_back(y);
                adj[y].push_back(x);
            }
        }
    }
}

}  // namespace

FasResult fas(const IndependenceTest& test, int max_depth, bool record_sepsets) {
    const int n = test.num_vars();
    std::vector<std::vector<int>> adj(n);
    SepsetMap sepsets;
    fas_depth_zero(test, 1, record_sepsets, adj, sepsets);

    for (int m = 1; (max_depth < 0 || m <= max_depth) && depth_reachable(adj, m); ++m) {
        std::vector<std::pair<int, int>> edges;
        for (int x = 0; x < n; ++x) {
            for (int y : adj[x]) {
                if (x < y) edges.emplace_back(x, y);
            }
        }
        for (const auto& [x, y] : edges) {
            // May have been removed earlier in this same depth.
            if (!std::binary_search(adj[x].begin(), adj[x].end(), y)) continue;
            auto sepset = find_sepset_at_depth(adj, test, x, y, m);
            if (sepset) {
                adj[x].erase(std::lower_bound(adj[x].begin(), adj[x].end(), y));
                adj[y].erase(std::lower_bound(adj[y].begin(), adj[y].end(), x));
                if (record_sepsets) sepsets.set(x, y, std::move(*sepset));
            }
        }
    }
    return FasResult{graph_from_adjacency(test.variable_names(), adj), std::move(sepsets)};
}

FasResult fas_stable(const IndependenceTest& test, int max_depth, int threads,
                     bool record_sepsets) {
    const int n = test.num_vars();
    std::vector<std::vector<int>> adj(n);
    SepsetMap sepsets;
    fas_depth_zero(test, threads, record_sepsets, adj, sepsets);

    for (int m = 1; (max_depth < 0 || m <= max_depth) && depth_reachable(adj, m); ++m) {
        // Adjacency is frozen for the whole depth; removals land at the barrier.
        const std::vector<std::vector<int>> frozen = adj;
        std::vector<std::pair<int, int>> edges;
        for (int x = 0; x < n; ++x) {
            for (int y : frozen[x]) {
                if (x < y) edges.emplace_back(x, y);
            }
        }
        std::vector<std::optional<std::vector<int>>> decisions(edges.size());
        parallel_chunks(edges.size(), threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                decisions[i] = find_sepset_at_depth(frozen, test, edges[i].first, edges[i].second, m);
            }
        });
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (!decisions[i]) continue;
            const auto [x, y] = edges[i];
            adj[x].erase(std::lower_bound(adj[x].begin(), adj[x].end(), y));
            adj[y].erase(std::lower_bound(adj[y].begin(), adj[y].end(), x));
            if (record_sepsets) sepsets.set(x, y, std::move(*decisions[i]));
        }
    }
    return FasResult{graph_from_adjacency(test.variable_names(), adj), std::move(sepsets)};
}

void orient_colliders_sepset(MixedGraph& g, const SepsetMap& sepsets) {
    for (const Triple& t : unshielded_triples(g)) {
        const std::vector<int>* sepset = sepsets.get(t.x, t.z);
        if (sepset == nullptr) {
            throw InternalError("missing sepset entry for nonadjacent pair (" + g.name(t.x) +
                                ", " + g.name(t.z) + ")");
        }
        if (!std::binary_search(sepset->begin(), sepset->end(), t.y)) {
            orient_collider(g, t);
        }
    }
}

TripleClass classify_triple_cpc(const MixedGraph& g, const IndependenceTest& test,
                                const Triple& t, int max_depth) {
    // Vote among the separating sets of minimal size: walk subset sizes upward
    // over both endpoint neighborhoods and decide at the first size where any
    // subset yields independence. Larger sets are never consulted once a
    // smaller separator exists; mixing sizes lets near-threshold passes from
    // big conditioning sets veto decisive small separators, which floods the
    // output with spurious ambiguity on finite samples.
    const std::vector<int> pool_x = pool_without(g.adjacents(t.x), t.z);
    const std::vector<int> pool_z = pool_without(g.adjacents(t.z), t.x);
    const int largest = static_cast<int>(std::max(pool_x.size(), pool_z.size()));
    const int cap = max_depth < 0 ? largest : std::min(max_depth, largest);
    for (int k = 0; k <= cap; ++k) {
        bool with_y = false;
        bool without_y = false;
        const auto scan_pool = [&](const std::vector<int>& pool) {
            if ((with_y && without_y) || k > static_cast<int>(pool.size())) return;
            for_each_combination(pool, k, [&](const std::vector<int>& subset) {
                if (!test.test(t.x, t.z, subset).independent) return false;
                if (std::binary_search(subset.begin(), subset.end(), t.y)) {
                    with_y = true;
                } else {
                    without_y = true;
                }
                return with_y && without_y;
            });
        };
        scan_pool(pool_x);
        scan_pool(pool_z);
        if (with_y && without_y) return TripleClass::Ambiguous;
        if (with_y) return TripleClass::Noncollider;
        if (without_y) return TripleClass::Collider;
    }
    // No subset of either neighborhood separates the pair at all.
    return TripleClass::Ambiguous;
}

std::optional<MaxPResult> max_p_sepset(const MixedGraph& g, const IndependenceTest& test,
                                       int x, int z, int max_depth) {
    if (g.is_adjacent(x, z)) throw InvalidInputError("max_p_sepset: nodes are adjacent");
    std::optional<MaxPResult> best;
    const auto consider = [&](const std::vector<int>& subset, double p) {
        if (!best || p > best->p_value ||
            (p == best->p_value && (subset.size() < best->sepset.size() ||
                                    (subset.size() == best->sepset.size() &&
                                     std::lexicographical_compare(subset.begin(), subset.end(),
                                                                  best->sepset.begin(),
                                                                  best->sepset.end()))))) {
            best = MaxPResult{subset, p};
        }
    };
    const auto scan_pool = [&](const std::vector<int>& pool) {
        const int cap = max_depth < 0 ? static_cast<int>(pool.size())
                                      : std::min<int>(max_depth, static_cast<int>(pool.size()));
        for (int k = 0; k <= cap; ++k) {
            for_each_combination(pool, k, [&](const std::vector<int>& subset) {
                consider(subset, test.test(x, z, subset).p_value);
                return false;
            });
        }
    };
    scan_pool(pool_without(g.adjacents(x), z));
    scan_pool(pool_without(g.adjacents(z), x));
    return best;
}

std::vector<ColliderRecord> orient_colliders_maxp(MixedGraph& g, const IndependenceTest& test,
                                                  int max_depth, int threads) {
    const std::vector<Triple> triples = unshielded_triples(g);
    std::vector<std::optional<ColliderRecord>> candidates(triples.size());
    parallel_chunks(triples.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const Triple& t = triples[i];
            const auto mp = max_p_sepset(g, test, t.x, t.z, max_depth);
            if (mp && !std::binary_search(mp->sepset.begin(), mp->sepset.end(), t.y)) {
                candidates[i] = ColliderRecord{t, mp->p_value, mp->sepset};
            }
        }
    });
    std::vector<ColliderRecord> records;
    for (auto& c : candidates) {
        if (c) records.push_back(std::move(*c));
    }
    std::sort(records.begin(), records.end(), [](const ColliderRecord& l, const ColliderRecord& r) {
        if (l.p_value != r.p_value) return l.p_value > r.p_value;
        return l.triple < r.triple;
    });
    for (const ColliderRecord& rec : records) {
        if (!would_create_bidirected(g, rec.triple)) orient_collider(g, rec.triple);
    }
    return records;
}

SearchResult run_search(const SearchConfig& config, const IndependenceTest& test) {
    if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
        throw InvalidInputError("alpha must be in (0, 1)");
    }
    if (config.threads < 1) throw InvalidInputError("threads must be positive");

    const auto start = std::chrono::steady_clock::now();
    SearchResult result{MixedGraph({}), {}, {}, 0.0};
    switch (config.algorithm) {
        case Algorithm::Pc: {
            auto [graph, sepsets] = fas(test, config.max_depth);
            orient_colliders_sepset(graph, sepsets);
            meek_closure(graph);
            result.graph = std::move(graph);
            result.sepsets = std::move(sepsets);
            break;
        }
        case Algorithm::PcStable: {
            auto [graph, sepsets] = fas_stable(test, config.max_depth, config.threads);
            orient_colliders_sepset(graph, sepsets);
            meek_closure(graph);
            result.graph = std::move(graph);
            result.sepsets = std::move(sepsets);
            break;
        }
        case Algorithm::Cpc: {
            auto [graph, sepsets] = fas(test, config.max_depth, /*record_sepsets=*/false);
            for (const Triple& t : unshielded_triples(graph)) {
                switch (classify_triple_cpc(graph, test, t, config.max_depth)) {
                    case TripleClass::Collider:
                        // Refuse conflicting orientations rather than emit a
                        // bidirected edge; the first collider reached wins.
                        if (!would_create_bidirected(graph, t)) orient_collider(graph, t);
                        break;
                    case TripleClass::Ambiguous: result.ambiguous.insert(t); break;
                    case TripleClass::Noncollider: break;
                }
            }
            meek_closure(graph, result.ambiguous);
            result.graph = std::move(graph);
            break;
        }
        case Algorithm::PcMax: {
            auto [graph, sepsets] =
                fas_stable(test, config.max_depth, config.threads, /*record_sepsets=*/false);
            orient_colliders_maxp(graph, test, config.max_depth, config.threads);
            meek_closure(graph);
            result.graph = std::move(graph);
            break;
        }
    }
    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace pcmax
