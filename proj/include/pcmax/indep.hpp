#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pcmax/correlation.hpp"
#include "pcmax/dataset.hpp"
#include "pcmax/graph.hpp"

namespace pcmax {

/// Outcome of one conditional-independence query.
struct TestResult {
    bool independent;
    double p_value;   // in [0, 1]; the oracle uses 1.0 / 0.0
    double statistic;
};

/// Pure function of immutable inputs; safe to call concurrently.
class IndependenceTest {
public:
    virtual ~IndependenceTest() = default;
    virtual TestResult test(int x, int y, std::span<const int> s) const = 0;
    virtual int num_vars() const = 0;
    virtual const std::vector<std::string>& variable_names() const = 0;
};

/// Fisher Z test on partial correlations:
///   z = sqrt(n - |s| - 3) * atanh(r),  p = 2 (1 - Phi(|z|)),
/// independent iff p > alpha.
class FisherZTest final : public IndependenceTest {
public:
    FisherZTest(CorrelationMatrix corr, double alpha);

    TestResult test(int x, int y, std::span<const int> s) const override;
    int num_vars() const override { return corr_.num_vars(); }
    const std::vector<std::string>& variable_names() const override { return corr_.variables; }
    double alpha() const { return alpha_; }

private:
    CorrelationMatrix corr_;
    double alpha_;
};

/// BIC-difference score test. With BIC = 2L - c k ln N and
/// L = -n/2 ln(residual variance), compares the regression y <- s u {x}
/// (score B1) against y <- s (score B2). Independent iff B1 - B2 <= 0,
/// i.e. the extra regressor fails to beat the penalty. The p-value is the
/// tail of the nested-model variance-ratio F with (1, n - |s| - 2) degrees
/// of freedom and is used only for max-p ordering.
class BicDiffTest final : public IndependenceTest {
public:
    BicDiffTest(const Dataset& d, double penalty);

    TestResult test(int x, int y, std::span<const int> s) const override;
    int num_vars() const override { return static_cast<int>(variables_.size()); }
    const std::vector<std::string>& variable_names() const override { return variables_; }
    double penalty() const { return penalty_; }

private:
    double residual_variance(int target, std::span<const int> regressors) const;

    std::vector<std::string> variables_;
    Eigen::MatrixXd cov_;
    long n_;
    double penalty_;
};

/// d-separation in a known DAG exposed through the test interface, for
/// large-sample-limit verification. p-value 1.0 when separated, else 0.0.
class OracleTest final : public IndependenceTest {
public:
    explicit OracleTest(MixedGraph dag);

    TestResult test(int x, int y, std::span<const int> s) const override;
    int num_vars() const override { return dag_.num_nodes(); }
    const std::vector<std::string>& variable_names() const override { return dag_.names(); }
    const MixedGraph& dag() const { return dag_; }

private:
    MixedGraph dag_;
};

/// Two-sided standard-normal tail probability 2 (1 - Phi(|z|)).
double normal_two_sided_p(double z);

/// Upper tail of the F(1, d2) distribution.
double f_tail_probability(double f, double d2);

}  // namespace pcmax
