#include "pcmax/indep.hpp"

#include <algorithm>
#include <boost/math/distributions/fisher_f.hpp>
#include <cmath>

#include "pcmax/errors.hpp"

namespace pcmax {

double normal_two_sided_p(double z) {
    return std::erfc(std::abs(z) / std::sqrt(2.0));
}

double f_tail_probability(double f, double d2) {
    if (f <= 0.0) return 1.0;
    const boost::math::fisher_f dist(1.0, d2);
    return boost::math::cdf(boost::math::complement(dist, f));
}

FisherZTest::FisherZTest(CorrelationMatrix corr, double alpha)
    : corr_(std::move(corr)), alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInputError("alpha must be in (0, 1)");
}

TestResult FisherZTest::test(int x, int y, std::span<const int> s) const {
    const long n = corr_.sample_size;
    const long k = static_cast<long>(s.size());
    if (n <= k + 3) {
        throw DegenerateDataError("sample size " + std::to_string(n) +
                                  " too small for conditioning set of size " + std::to_string(k));
    }
    const double r = partial_correlation(corr_, x, y, s);
    const double z = std::sqrt(static_cast<double>(n - k - 3)) * std::atanh(r);
    const double p = normal_two_sided_p(z);
    return TestResult{p > alpha_, p, z};
}

BicDiffTest::BicDiffTest(const Dataset& d, double penalty)
    : variables_(d.variables), n_(d.num_rows()), penalty_(penalty) {
    if (!(penalty > 0.0)) throw InvalidInputError("penalty must be positive");
    const Eigen::RowVectorXd means = d.values.colwise().mean();
    const Eigen::MatrixXd centered = d.values.rowwise() - means;
    cov_ = (centered.transpose() * centered) / static_cast<double>(n_);
    cov_ = ((cov_ + cov_.transpose()) / 2.0).eval();
}

double BicDiffTest::residual_variance(int target, std::span<const int> regressors) const {
    const double var_y = cov_(target, target);
    if (regressors.empty()) return var_y;
    const int k = static_cast<int>(regressors.size());
    Eigen::MatrixXd cpp(k, k);
    Eigen::VectorXd cpy(k);
    for (int i = 0; i < k; ++i) {
        cpy(i) = cov_(regressors[i], target);
        for (int j = 0; j < k; ++j) cpp(i, j) = cov_(regressors[i], regressors[j]);
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(cpp);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
        throw DegenerateDataError("rank-deficient regression for " + variables_[target]);
    }
    const double explained = cpy.dot(ldlt.solve(cpy));
    const double resid = var_y - explained;
    if (!std::isfinite(resid)) {
        throw DegenerateDataError("rank-deficient regression for " + variables_[target]);
    }
    // Numerically perfect fits: floor the variance rather than taking log(0).
    return std::max(resid, 1e-300);
}

TestResult BicDiffTest::test(int x, int y, std::span<const int> s) const {
    if (x == y) throw InvalidInputError("bic_diff_test: x == y");
    if (x > y) std::swap(x, y);  // exact symmetry in (x, y)
    std::vector<int> reduced(s.begin(), s.end());
    std::sort(reduced.begin(), reduced.end());
    for (int v : reduced) {
        if (v == x || v == y) throw InvalidInputError("bic_diff_test: endpoint in conditioning set");
    }
    const long k = static_cast<long>(s.size());
    const double d2 = static_cast<double>(n_ - k - 2);
    if (d2 < 1.0) {
        throw DegenerateDataError("sample size " + std::to_string(n_) +
                                  " too small for conditioning set of size " + std::to_string(k));
    }
    std::vector<int> full = reduced;
    full.insert(std::lower_bound(full.begin(), full.end(), x), x);

    const double n = static_cast<double>(n_);
    const double sigma2_full = residual_variance(y, full);
    const double sigma2_reduced = residual_variance(y, reduced);
    // B1 - B2 = n ln(s2_reduced / s2_full) - c ln n; independence when the
    // extra regressor does not beat the penalty.
    const double statistic =
        n * std::log(sigma2_reduced / sigma2_full) - penalty_ * std::log(n);
    const double f = std::max(0.0, sigma2_reduced / sigma2_full - 1.0) * d2;
    const double p = f_tail_probability(f, d2);
    return TestResult{statistic <= 0.0, p, statistic};
}

OracleTest::OracleTest(MixedGraph dag) : dag_(std::move(dag)) {
    // Fail fast on invalid input rather than on the first query.
    topological_order(dag_);
}

TestResult OracleTest::test(int x, int y, std::span<const int> s) const {
    const bool indep = d_separated(dag_, x, y, s);
    return TestResult{indep, indep ? 1.0 : 0.0, 0.0};
}

}  // namespace pcmax
