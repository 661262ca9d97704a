#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "pcmax/dataset.hpp"

namespace pcmax {

/// Symmetric correlation matrix plus the sample size it was computed from.
/// Immutable after construction; safe to query concurrently.
struct CorrelationMatrix {
    std::vector<std::string> variables;
    Eigen::MatrixXd entries;  // p x p, unit diagonal
    long sample_size = 0;

    int num_vars() const { return static_cast<int>(variables.size()); }
};

/// Pearson correlation, two-pass mean/covariance. Errors on constant columns.
CorrelationMatrix correlation(const Dataset& d);

/// Partial correlation of x and y given s, by inverting the correlation
/// submatrix over {x, y} union s and returning -W_xy / sqrt(W_xx * W_yy).
/// The result is clamped to +-(1 - 1e-12).
double partial_correlation(const CorrelationMatrix& c, int x, int y, std::span<const int> s);

/// Correlation matrix file: first line "n=<sampleSize>", then the header
/// names, then a full p x p matrix, whitespace-delimited.
CorrelationMatrix parse_correlation_text(const std::string& text);
CorrelationMatrix load_correlation_file(const std::string& path);
std::string correlation_to_text(const CorrelationMatrix& c);
void save_correlation_file(const std::string& path, const CorrelationMatrix& c);

}  // namespace pcmax
