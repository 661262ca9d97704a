#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace pcmax {

/// Continuous tabular data: rows are i.i.d. cases, columns are variables.
struct Dataset {
    std::vector<std::string> variables;
    Eigen::MatrixXd values;  // n x p

    long num_rows() const { return values.rows(); }
    int num_vars() const { return static_cast<int>(variables.size()); }
};

/// Parse a delimited text file: header row of unique variable names, then
/// one numeric case per line. Requires n >= 2 rows.
Dataset load_dataset(const std::string& path, char delimiter = '\t');
Dataset parse_dataset(const std::string& text, char delimiter = '\t');

/// Write with enough digits that a reload reproduces the values exactly.
void save_dataset(const std::string& path, const Dataset& d, char delimiter = '\t');
std::string dataset_to_text(const Dataset& d, char delimiter = '\t');

}  // namespace pcmax
