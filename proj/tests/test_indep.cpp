#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "pcmax/correlation.hpp"
#include "pcmax/errors.hpp"
#include "pcmax/indep.hpp"

using namespace pcmax;

namespace {

std::vector<std::string> var_names(int n) {
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) names.push_back("X" + std::to_string(i));
    return names;
}

CorrelationMatrix random_correlation(std::mt19937_64& rng, int p, long n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Dataset d;
    d.variables = var_names(p);
    d.values.resize(n, p);
    // Random linear mixing so the variables are substantially correlated.
    Eigen::MatrixXd mix(p, p);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) mix(i, j) = normal(rng);
    }
    Eigen::MatrixXd base(n, p);
    for (long r = 0; r < n; ++r) {
        for (int j = 0; j < p; ++j) base(r, j) = normal(rng);
    }
    d.values = base * mix.transpose();
    return correlation(d);
}

// Textbook recursion: condition on the nodes of s one at a time.
double recursive_partial_correlation(const CorrelationMatrix& c, int x, int y,
                                     std::vector<int> s) {
    if (s.empty()) return c.entries(x, y);
    const int w = s.back();
    s.pop_back();
    const double rxy = recursive_partial_correlation(c, x, y, s);
    const double rxw = recursive_partial_correlation(c, x, w, s);
    const double ryw = recursive_partial_correlation(c, y, w, s);
    return (rxy - rxw * ryw) / std::sqrt((1.0 - rxw * rxw) * (1.0 - ryw * ryw));
}

CorrelationMatrix two_var_corr(double r, long n) {
    CorrelationMatrix c;
    c.variables = {"X", "Y"};
    c.entries.resize(2, 2);
    c.entries << 1.0, r, r, 1.0;
    c.sample_size = n;
    return c;
}

}  // namespace

TEST_CASE("partial correlation with empty set returns the entry exactly") {
    std::mt19937_64 rng(11);
    const CorrelationMatrix c = random_correlation(rng, 4, 50);
    CHECK(partial_correlation(c, 0, 2, {}) == c.entries(0, 2));
}

TEST_CASE("partial correlation on the identity matrix is zero") {
    CorrelationMatrix c;
    c.variables = var_names(4);
    c.entries = Eigen::MatrixXd::Identity(4, 4);
    c.sample_size = 100;
    const std::vector<int> s = {1, 3};
    CHECK(partial_correlation(c, 0, 2, s) == 0.0);
}

TEST_CASE("partial correlation matches the recursive formula") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const CorrelationMatrix c = random_correlation(rng, 5, 200);
        for (const auto& s : std::vector<std::vector<int>>{{2}, {2, 3}, {2, 3, 4}}) {
            const double direct = partial_correlation(c, 0, 1, s);
            const double recursive = recursive_partial_correlation(c, 0, 1, s);
            CHECK(std::abs(direct - recursive) < 1e-10);
        }
    }
}

TEST_CASE("partial correlation symmetry and order invariance are exact") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 50; ++trial) {
        const CorrelationMatrix c = random_correlation(rng, 5, 100);
        const std::vector<int> s1 = {1, 4};
        const std::vector<int> s2 = {4, 1};
        CHECK(partial_correlation(c, 0, 2, s1) == partial_correlation(c, 2, 0, s1));
        CHECK(partial_correlation(c, 0, 2, s1) == partial_correlation(c, 0, 2, s2));
    }
}

TEST_CASE("partial correlation rejects bad arguments") {
    std::mt19937_64 rng(44);
    const CorrelationMatrix c = random_correlation(rng, 4, 50);
    const std::vector<int> with_x = {0};
    CHECK_THROWS_AS(partial_correlation(c, 1, 1, {}), InvalidInputError);
    CHECK_THROWS_AS(partial_correlation(c, 0, 1, with_x), InvalidInputError);
}

TEST_CASE("fisher z statistic and p-value at r=0.5, n=103") {
    const FisherZTest test(two_var_corr(0.5, 103), 0.001);
    const TestResult res = test.test(0, 1, {});
    // z = sqrt(100) * atanh(0.5)
    CHECK(res.statistic == doctest::Approx(5.4930614433405485).epsilon(1e-14));
    CHECK(res.p_value == doctest::Approx(3.9502527849992219e-8).epsilon(1e-12));
    CHECK_FALSE(res.independent);
}

TEST_CASE("fisher z independence verdict follows alpha") {
    // Weak correlation at a small sample: p well above 0.001.
    const FisherZTest weak(two_var_corr(0.05, 100), 0.001);
    CHECK(weak.test(0, 1, {}).independent);
    const FisherZTest strict(two_var_corr(0.05, 100), 0.99);
    CHECK_FALSE(strict.test(0, 1, {}).independent);
}

TEST_CASE("fisher z rejects insufficient sample size") {
    CorrelationMatrix c;
    c.variables = var_names(5);
    c.entries = Eigen::MatrixXd::Identity(5, 5);
    c.sample_size = 5;
    const FisherZTest test(c, 0.05);
    const std::vector<int> s = {2, 3};  // needs n > |s| + 3 = 5
    CHECK_THROWS_AS(test.test(0, 1, s), DegenerateDataError);
}

TEST_CASE("fisher z is symmetric in x and y exactly") {
    std::mt19937_64 rng(45);
    const FisherZTest test(random_correlation(rng, 5, 150), 0.01);
    const std::vector<int> s = {2, 4};
    const TestResult a = test.test(0, 3, s);
    const TestResult b = test.test(3, 0, s);
    CHECK(a.p_value == b.p_value);
    CHECK(a.statistic == b.statistic);
}

TEST_CASE("normal and F tail helpers match reference values") {
    CHECK(normal_two_sided_p(1.96) == doctest::Approx(0.04999579029644087).epsilon(1e-13));
    CHECK(normal_two_sided_p(-1.96) == doctest::Approx(0.04999579029644087).epsilon(1e-13));
    CHECK(normal_two_sided_p(3.0) == doctest::Approx(0.002699796063260189).epsilon(1e-13));
    CHECK(normal_two_sided_p(0.0) == 1.0);
    CHECK(f_tail_probability(4.0, 10.0) == doctest::Approx(0.07338803477074037).epsilon(1e-12));
    CHECK(f_tail_probability(1.0, 50.0) == doctest::Approx(0.3221256451002433).epsilon(1e-12));
    CHECK(f_tail_probability(9.5, 997.0) == doctest::Approx(0.00211115961024946).epsilon(1e-12));
}

TEST_CASE("bic difference test verdicts") {
    std::mt19937_64 rng(46);
    std::normal_distribution<double> normal(0.0, 1.0);
    const long n = 2000;
    Dataset d;
    d.variables = {"A", "B", "C"};
    d.values.resize(n, 3);
    for (long r = 0; r < n; ++r) {
        const double a = normal(rng);
        const double b = normal(rng);           // independent of A
        const double c = 0.8 * a + normal(rng);  // child of A
        d.values(r, 0) = a;
        d.values(r, 1) = b;
        d.values(r, 2) = c;
    }
    const BicDiffTest test(d, 4.0);
    const TestResult ab = test.test(0, 1, {});
    CHECK(ab.independent);
    CHECK(ab.statistic <= 0.0);
    const TestResult ac = test.test(0, 2, {});
    CHECK_FALSE(ac.independent);
    CHECK(ac.statistic > 0.0);
    // A and C stay dependent given B; A and B stay independent given C? No:
    // conditioning on the common child C induces dependence.
    const std::vector<int> given_b = {1};
    CHECK_FALSE(test.test(0, 2, given_b).independent);
}

TEST_CASE("bic difference test is symmetric in x and y exactly") {
    std::mt19937_64 rng(47);
    std::normal_distribution<double> normal(0.0, 1.0);
    Dataset d;
    d.variables = var_names(4);
    d.values.resize(500, 4);
    for (long r = 0; r < 500; ++r) {
        for (int j = 0; j < 4; ++j) d.values(r, j) = normal(rng);
    }
    const BicDiffTest test(d, 2.0);
    const std::vector<int> s = {2};
    const TestResult a = test.test(0, 1, s);
    const TestResult b = test.test(1, 0, s);
    CHECK(a.statistic == b.statistic);
    CHECK(a.p_value == b.p_value);
    CHECK(a.independent == b.independent);
}

TEST_CASE("bic difference p-value ordering tracks the statistic") {
    std::mt19937_64 rng(48);
    std::normal_distribution<double> normal(0.0, 1.0);
    Dataset d;
    d.variables = var_names(3);
    d.values.resize(300, 3);
    for (long r = 0; r < 300; ++r) {
        const double a = normal(rng);
        d.values(r, 0) = a;
        d.values(r, 1) = 0.3 * a + normal(rng);
        d.values(r, 2) = 0.9 * a + normal(rng);
    }
    const BicDiffTest test(d, 4.0);
    const TestResult weak = test.test(0, 1, {});
    const TestResult strong = test.test(0, 2, {});
    CHECK(strong.statistic > weak.statistic);
    CHECK(strong.p_value < weak.p_value);
}

TEST_CASE("oracle test answers d-separation queries") {
    MixedGraph dag(var_names(3));
    dag.add_directed(0, 1);
    dag.add_directed(2, 1);
    const OracleTest test(dag);
    const TestResult marginal = test.test(0, 2, {});
    CHECK(marginal.independent);
    CHECK(marginal.p_value == 1.0);
    const std::vector<int> s = {1};
    const TestResult conditioned = test.test(0, 2, s);
    CHECK_FALSE(conditioned.independent);
    CHECK(conditioned.p_value == 0.0);
}

TEST_CASE("oracle test rejects cyclic graphs") {
    MixedGraph g(var_names(3));
    g.add_directed(0, 1);
    g.add_directed(1, 2);
    g.add_directed(2, 0);
    CHECK_THROWS_AS(OracleTest{g}, InvalidInputError);
}
