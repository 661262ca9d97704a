#include "pcmax/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pcmax/errors.hpp"

namespace pcmax {

namespace {
constexpr double kCorrClamp = 1.0 - 1e-12;
}

CorrelationMatrix correlation(const Dataset& d) {
    const long n = d.num_rows();
    const int p = d.num_vars();
    if (n < 2) throw InvalidInputError("correlation needs at least 2 rows");

    const Eigen::RowVectorXd means = d.values.colwise().mean();
    const Eigen::MatrixXd centered = d.values.rowwise() - means;
    const Eigen::VectorXd sd =
        (centered.colwise().squaredNorm() / static_cast<double>(n)).cwiseSqrt();
    for (int j = 0; j < p; ++j) {
        if (sd(j) == 0.0) {
            throw DegenerateDataError("constant column: " + d.variables[j]);
        }
    }
    Eigen::MatrixXd c = (centered.transpose() * centered) / static_cast<double>(n);
    c = sd.cwiseInverse().asDiagonal() * c * sd.cwiseInverse().asDiagonal();
    // Enforce exact symmetry and unit diagonal against rounding drift.
    c = ((c + c.transpose()) / 2.0).eval();
    for (int j = 0; j < p; ++j) c(j, j) = 1.0;
    c = c.cwiseMax(-1.0).cwiseMin(1.0);
    return CorrelationMatrix{d.variables, std::move(c), n};
}

double partial_correlation(const CorrelationMatrix& c, int x, int y, std::span<const int> s) {
    if (x == y) throw InvalidInputError("partial_correlation: x == y");
    if (x > y) std::swap(x, y);  // exact symmetry in (x, y)
    for (int v : s) {
        if (v == x || v == y) {
            throw InvalidInputError("partial_correlation: endpoint in conditioning set");
        }
    }
    if (s.empty()) return c.entries(x, y);

    const int k = static_cast<int>(s.size()) + 2;
    Eigen::MatrixXd sub(k, k);
    std::vector<int> idx;
    idx.reserve(k);
    idx.push_back(x);
    idx.push_back(y);
    idx.insert(idx.end(), s.begin(), s.end());
    // Order of s must not affect the result; sort the conditioning block.
    std::sort(idx.begin() + 2, idx.end());
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) sub(i, j) = c.entries(idx[i], idx[j]);
    }

    Eigen::LDLT<Eigen::MatrixXd> ldlt(sub);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
        std::ostringstream msg;
        msg << "singular correlation submatrix for (" << c.variables[x] << ", " << c.variables[y]
            << " | ";
        for (std::size_t i = 0; i < s.size(); ++i) msg << (i ? "," : "") << c.variables[s[i]];
        msg << ")";
        throw DegenerateDataError(msg.str());
    }
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(k, 2);
    rhs(0, 0) = 1.0;
    rhs(1, 1) = 1.0;
    const Eigen::MatrixXd omega = ldlt.solve(rhs);
    const double denom = omega(0, 0) * omega(1, 1);
    if (!(denom > 0.0) || !std::isfinite(omega(1, 0))) {
        throw DegenerateDataError("singular correlation submatrix for (" + c.variables[x] + ", " +
                                  c.variables[y] + ")");
    }
    const double r = -omega(1, 0) / std::sqrt(denom);
    if (!std::isfinite(r)) {
        throw DegenerateDataError("non-finite partial correlation for (" + c.variables[x] + ", " +
                                  c.variables[y] + ")");
    }
    return std::clamp(r, -kCorrClamp, kCorrClamp);
}

CorrelationMatrix parse_correlation_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw InvalidInputError("empty correlation file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("n=", 0) != 0) {
        throw InvalidInputError("correlation file must start with 'n=<sampleSize>'");
    }
    long n = 0;
    try {
        n = std::stol(line.substr(2));
    } catch (const std::exception&) {
        throw InvalidInputError("bad sample size line: " + line);
    }
    if (n < 2) throw InvalidInputError("sample size must be >= 2");

    if (!std::getline(in, line)) throw InvalidInputError("missing header line");
    std::vector<std::string> names;
    {
        std::istringstream hs(line);
        std::string name;
        while (hs >> name) names.push_back(name);
    }
    const int p = static_cast<int>(names.size());
    if (p == 0) throw InvalidInputError("empty header line");

    Eigen::MatrixXd m(p, p);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            if (!(in >> m(i, j))) {
                throw InvalidInputError("correlation matrix truncated at row " +
                                        std::to_string(i + 1));
            }
        }
    }
    for (int i = 0; i < p; ++i) {
        if (m(i, i) != 1.0) throw InvalidInputError("correlation diagonal must be 1");
        for (int j = 0; j < p; ++j) {
            if (std::abs(m(i, j) - m(j, i)) > 1e-12) {
                throw InvalidInputError("correlation matrix not symmetric");
            }
            if (m(i, j) < -1.0 || m(i, j) > 1.0) {
                throw InvalidInputError("correlation entry out of [-1, 1]");
            }
        }
    }
    m = ((m + m.transpose()) / 2.0).eval();
    return CorrelationMatrix{std::move(names), std::move(m), n};
}

CorrelationMatrix load_correlation_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInputError("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_correlation_text(buf.str());
}

std::string correlation_to_text(const CorrelationMatrix& c) {
    std::ostringstream out;
    out.precision(17);
    out << "n=" << c.sample_size << '\n';
    for (int j = 0; j < c.num_vars(); ++j) {
        if (j > 0) out << ' ';
        out << c.variables[j];
    }
    out << '\n';
    for (int i = 0; i < c.num_vars(); ++i) {
        for (int j = 0; j < c.num_vars(); ++j) {
            if (j > 0) out << ' ';
            out << c.entries(i, j);
        }
        out << '\n';
    }
    return out.str();
}

void save_correlation_file(const std::string& path, const CorrelationMatrix& c) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInputError("cannot write file: " + path);
    out << correlation_to_text(c);
}

}  // namespace pcmax
