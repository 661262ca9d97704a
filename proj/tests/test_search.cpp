#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <span>
#include <tuple>
#include <vector>

#include "pcmax/correlation.hpp"

#include "pcmax/errors.hpp"
#include "pcmax/search.hpp"
#include "pcmax/sim.hpp"

using namespace pcmax;

namespace {

std::vector<std::string> var_names(int n) {
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) names.push_back("X" + std::to_string(i));
    return names;
}

// Scripted test: p-values looked up by (min(x,y), max(x,y), sorted s);
// anything not scripted is dependent with p = 0.
class ScriptedTest final : public IndependenceTest {
public:
    ScriptedTest(int n, double alpha) : names_(var_names(n)), alpha_(alpha) {}

    void script(int x, int y, std::vector<int> s, double p) {
        if (x > y) std::swap(x, y);
        std::sort(s.begin(), s.end());
        table_[{x, y, s}] = p;
    }

    TestResult test(int x, int y, std::span<const int> s) const override {
        if (x > y) std::swap(x, y);
        std::vector<int> key(s.begin(), s.end());
        std::sort(key.begin(), key.end());
        const auto it = table_.find({x, y, key});
        const double p = it == table_.end() ? 0.0 : it->second;
        return TestResult{p > alpha_, p, 0.0};
    }
    int num_vars() const override { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& variable_names() const override { return names_; }

private:
    std::map<std::tuple<int, int, std::vector<int>>, double> table_;
    std::vector<std::string> names_;
    double alpha_;
};

MixedGraph path4_undirected() {
    MixedGraph g(var_names(4));
    g.add_undirected(0, 1);
    g.add_undirected(1, 2);
    g.add_undirected(2, 3);
    return g;
}

}  // namespace

TEST_CASE("algorithm and test names round trip") {
    for (const auto* name : {"pc", "cpc", "pc-stable", "pc-max"}) {
        CHECK(to_string(algorithm_from_string(name)) == name);
    }
    for (const auto* name : {"fisher-z", "bic-diff", "oracle"}) {
        CHECK(to_string(test_kind_from_string(name)) == name);
    }
    CHECK_THROWS_AS(algorithm_from_string("fges"), InvalidInputError);
    CHECK_THROWS_AS(test_kind_from_string("chi-square"), InvalidInputError);
}

TEST_CASE("fas removes the shielding edge of a collider and records the sepset") {
    MixedGraph dag(var_names(3));
    dag.add_directed(0, 1);
    dag.add_directed(2, 1);
    const OracleTest oracle(dag);
    for (const bool stable : {false, true}) {
        const FasResult res = stable ? fas_stable(oracle) : fas(oracle);
        CHECK(res.graph.is_adjacent(0, 1));
        CHECK(res.graph.is_adjacent(1, 2));
        CHECK_FALSE(res.graph.is_adjacent(0, 2));
        REQUIRE(res.sepsets.get(0, 2) != nullptr);
        CHECK(res.sepsets.get(0, 2)->empty());
    }
}

TEST_CASE("fas removes a chain edge with the middle node as sepset") {
    MixedGraph dag(var_names(3));
    dag.add_directed(0, 1);
    dag.add_directed(1, 2);
    const OracleTest oracle(dag);
    const FasResult res = fas(oracle);
    CHECK_FALSE(res.graph.is_adjacent(0, 2));
    REQUIRE(res.sepsets.get(0, 2) != nullptr);
    CHECK(*res.sepsets.get(0, 2) == std::vector<int>{1});
}

TEST_CASE("fas max_depth limits the conditioning size") {
    // X1 -> X3 <- X2 plus X1 -> X4, X2 -> X4: removing X1-X2 needs depth 0,
    // removing X3-X4 needs conditioning on both parents (depth 2).
    MixedGraph dag(var_names(4));
    dag.add_directed(0, 2);
    dag.add_directed(1, 2);
    dag.add_directed(0, 3);
    dag.add_directed(1, 3);
    const OracleTest oracle(dag);
    const FasResult shallow = fas(oracle, 1);
    CHECK(shallow.graph.is_adjacent(2, 3));
    const FasResult deep = fas(oracle, 2);
    CHECK_FALSE(deep.graph.is_adjacent(2, 3));
}

TEST_CASE("fas_stable matches across thread counts") {
    const MixedGraph dag = random_dag(RandomGraphConfig{40, 3.0, 99});
    const OracleTest oracle(dag);
    const FasResult t1 = fas_stable(oracle, -1, 1);
    const FasResult t8 = fas_stable(oracle, -1, 8);
    CHECK(t1.graph == t8.graph);
}

TEST_CASE("orient_colliders_sepset") {
    SUBCASE("empty sepset orients a collider") {
        MixedGraph g(var_names(3));
        g.add_undirected(0, 1);
        g.add_undirected(1, 2);
        SepsetMap sepsets;
        sepsets.set(0, 2, {});
        orient_colliders_sepset(g, sepsets);
        CHECK(g.is_directed(0, 1));
        CHECK(g.is_directed(2, 1));
    }
    SUBCASE("sepset containing the middle node leaves edges alone") {
        MixedGraph g(var_names(3));
        g.add_undirected(0, 1);
        g.add_undirected(1, 2);
        SepsetMap sepsets;
        sepsets.set(0, 2, {1});
        orient_colliders_sepset(g, sepsets);
        CHECK(g.is_undirected(0, 1));
        CHECK(g.is_undirected(1, 2));
    }
    SUBCASE("adversarial chain produces a bidirected edge") {
        MixedGraph g = path4_undirected();
        SepsetMap sepsets;
        sepsets.set(0, 2, {});  // (X1, X2, X3) collider
        sepsets.set(1, 3, {});  // (X2, X3, X4) collider
        orient_colliders_sepset(g, sepsets);
        CHECK(g.is_bidirected(1, 2));
    }
    SUBCASE("missing entry is an internal error") {
        MixedGraph g(var_names(3));
        g.add_undirected(0, 1);
        g.add_undirected(1, 2);
        const SepsetMap empty;
        CHECK_THROWS_AS(orient_colliders_sepset(g, empty), InternalError);
    }
}

TEST_CASE("classify_triple_cpc under the oracle") {
    SUBCASE("true collider") {
        MixedGraph dag(var_names(3));
        dag.add_directed(0, 1);
        dag.add_directed(2, 1);
        const OracleTest oracle(dag);
        MixedGraph g(var_names(3));
        g.add_undirected(0, 1);
        g.add_undirected(1, 2);
        CHECK(classify_triple_cpc(g, oracle, Triple{0, 1, 2}) == TripleClass::Collider);
    }
    SUBCASE("true chain") {
        MixedGraph dag(var_names(3));
        dag.add_directed(0, 1);
        dag.add_directed(1, 2);
        const OracleTest oracle(dag);
        MixedGraph g(var_names(3));
        g.add_undirected(0, 1);
        g.add_undirected(1, 2);
        CHECK(classify_triple_cpc(g, oracle, Triple{0, 1, 2}) == TripleClass::Noncollider);
    }
}

TEST_CASE("classify_triple_cpc votes among minimal-size separating sets") {
    SUBCASE("disagreement at the same size is ambiguous") {
        // 0-1-2 plus a second neighbor 3 of 0: {1} and {3} both separate.
        MixedGraph g(var_names(4));
        g.add_undirected(0, 1);
        g.add_undirected(1, 2);
        g.add_undirected(0, 3);
        ScriptedTest test(4, 0.05);
        test.script(0, 2, {1}, 0.5);
        test.script(0, 2, {3}, 0.5);
        CHECK(classify_triple_cpc(g, test, Triple{0, 1, 2}) == TripleClass::Ambiguous);
    }
    SUBCASE("a smaller separating set preempts larger ones") {
        // The empty set already separates, so {1} is never consulted.
        MixedGraph g(var_names(3));
        g.add_undirected(0, 1);
        g.add_undirected(1, 2);
        ScriptedTest test(3, 0.05);
        test.script(0, 2, {}, 0.5);
        test.script(0, 2, {1}, 0.9);
        CHECK(classify_triple_cpc(g, test, Triple{0, 1, 2}) == TripleClass::Collider);
    }
    SUBCASE("no subset passes") {
        MixedGraph g(var_names(3));
        g.add_undirected(0, 1);
        g.add_undirected(1, 2);
        const ScriptedTest test(3, 0.05);
        CHECK(classify_triple_cpc(g, test, Triple{0, 1, 2}) == TripleClass::Ambiguous);
    }
}

TEST_CASE("max_p_sepset under the oracle") {
    SUBCASE("collider picks the empty set") {
        MixedGraph dag(var_names(3));
        dag.add_directed(0, 1);
        dag.add_directed(2, 1);
        const OracleTest oracle(dag);
        MixedGraph g(var_names(3));
        g.add_undirected(0, 1);
        g.add_undirected(1, 2);
        const auto res = max_p_sepset(g, oracle, 0, 2);
        REQUIRE(res.has_value());
        CHECK(res->sepset.empty());
        CHECK(res->p_value == 1.0);
    }
    SUBCASE("chain picks the middle node") {
        MixedGraph dag(var_names(3));
        dag.add_directed(0, 1);
        dag.add_directed(1, 2);
        const OracleTest oracle(dag);
        MixedGraph g(var_names(3));
        g.add_undirected(0, 1);
        g.add_undirected(1, 2);
        const auto res = max_p_sepset(g, oracle, 0, 2);
        REQUIRE(res.has_value());
        CHECK(res->sepset == std::vector<int>{1});
        CHECK(res->p_value == 1.0);
    }
    SUBCASE("ties break to the smaller then lexicographically earlier set") {
        ScriptedTest test(4, 0.05);
        MixedGraph g = path4_undirected();
        g.add_undirected(0, 2);  // give X1 another neighbor
        // pair (X1, X4): adj(X1)\{X4} = {X2, X3}, adj(X4)\{X1} = {X3}
        test.script(0, 3, {2}, 0.7);
        test.script(0, 3, {1}, 0.7);
        test.script(0, 3, {1, 2}, 0.7);
        const auto res = max_p_sepset(g, test, 0, 3);
        REQUIRE(res.has_value());
        CHECK(res->sepset == std::vector<int>{1});
        CHECK(res->p_value == 0.7);
    }
}

TEST_CASE("max_p_sepset requires a nonadjacent pair") {
    MixedGraph g(var_names(2));
    g.add_undirected(0, 1);
    const ScriptedTest test(2, 0.05);
    CHECK_THROWS_AS(max_p_sepset(g, test, 0, 1), InvalidInputError);
}

TEST_CASE("orient_colliders_maxp skips orientations that would create bidirected edges") {
    // Path X1-X2-X3-X4 with candidate colliders at X2 (p=0.9) and X3 (p=0.4).
    ScriptedTest test(4, 2.0);  // alpha 2: every scripted p counts as independent
    test.script(0, 2, {}, 0.9);
    test.script(1, 3, {}, 0.4);
    MixedGraph g = path4_undirected();
    const auto records = orient_colliders_maxp(g, test);
    REQUIRE(records.size() == 2);
    CHECK(records[0].p_value == 0.9);
    CHECK(records[1].p_value == 0.4);
    CHECK(g.is_directed(0, 1));  // X1 -> X2
    CHECK(g.is_directed(2, 1));  // X3 -> X2
    CHECK(g.is_undirected(2, 3));
    for (const Edge& e : g.edges()) {
        CHECK_FALSE((e.at_a == Endpoint::Arrow && e.at_b == Endpoint::Arrow));
    }
}

TEST_CASE("orient_colliders_maxp matches across thread counts") {
    const MixedGraph dag = random_dag(RandomGraphConfig{30, 3.0, 5});
    const OracleTest oracle(dag);
    MixedGraph g1 = fas_stable(oracle).graph;
    MixedGraph g8 = g1;
    orient_colliders_maxp(g1, oracle, -1, 1);
    orient_colliders_maxp(g8, oracle, -1, 8);
    CHECK(g1 == g8);
}

TEST_CASE("all four algorithms recover the pattern under the oracle") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 7);
        const MixedGraph dag = random_dag(RandomGraphConfig{n, 2.5, rng()});
        const MixedGraph pattern = dag_to_cpdag(dag);
        const OracleTest oracle(dag);
        for (Algorithm algorithm :
             {Algorithm::Pc, Algorithm::Cpc, Algorithm::PcStable, Algorithm::PcMax}) {
            SearchConfig config;
            config.algorithm = algorithm;
            const SearchResult res = run_search(config, oracle);
            CHECK(res.graph == pattern);
            CHECK(res.ambiguous.empty());
        }
    }
}

TEST_CASE("pc-max edge set is invariant under variable permutation") {
    const MixedGraph dag = random_dag(RandomGraphConfig{30, 3.0, 17});
    const SemModel model = parameterize(dag, 18);
    const Dataset data = simulate(model, 800, 19);

    const auto edge_names = [](const MixedGraph& g) {
        std::set<std::pair<std::string, std::string>> out;
        for (const Edge& e : g.edges()) {
            out.insert(std::minmax(g.name(e.a), g.name(e.b)));
        }
        return out;
    };

    SearchConfig config;
    config.algorithm = Algorithm::PcMax;
    const FisherZTest base(correlation(data), config.alpha);
    const auto base_edges = edge_names(run_search(config, base).graph);

    std::mt19937_64 rng(20);
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<int> perm(data.num_vars());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        Dataset shuffled;
        shuffled.values.resize(data.values.rows(), data.values.cols());
        for (int j = 0; j < data.num_vars(); ++j) {
            shuffled.variables.push_back(data.variables[perm[j]]);
            shuffled.values.col(j) = data.values.col(perm[j]);
        }
        const FisherZTest test(correlation(shuffled), config.alpha);
        CHECK(edge_names(run_search(config, test).graph) == base_edges);
    }
}

TEST_CASE("pc-max never outputs a bidirected edge on finite samples") {
    std::mt19937_64 rng(321);
    for (int trial = 0; trial < 10; ++trial) {
        const MixedGraph dag = random_dag(RandomGraphConfig{25, 3.5, rng()});
        const Dataset data = simulate(parameterize(dag, rng()), 150, rng());
        SearchConfig config;
        config.algorithm = Algorithm::PcMax;
        config.alpha = 0.05;
        const FisherZTest test(correlation(data), config.alpha);
        const SearchResult res = run_search(config, test);
        for (const Edge& e : res.graph.edges()) {
            CHECK_FALSE((e.at_a == Endpoint::Arrow && e.at_b == Endpoint::Arrow));
        }
    }
}

TEST_CASE("collider records reproduce their p-values") {
    const MixedGraph dag = random_dag(RandomGraphConfig{20, 3.0, 44});
    const Dataset data = simulate(parameterize(dag, 45), 400, 46);
    const FisherZTest test(correlation(data), 0.01);
    MixedGraph g = fas_stable(test).graph;
    const auto records = orient_colliders_maxp(g, test);
    for (const auto& record : records) {
        CHECK(test.test(record.triple.x, record.triple.z, record.sepset).p_value ==
              record.p_value);
    }
}
