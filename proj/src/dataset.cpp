#include "pcmax/dataset.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "pcmax/errors.hpp"

namespace pcmax {

namespace {

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delimiter, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    if (!out.empty() && !out.back().empty() && out.back().back() == '\r') {
        out.back().pop_back();
    }
    return out;
}

}  // namespace

Dataset parse_dataset(const std::string& text, char delimiter) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw InvalidInputError("empty dataset");
    Dataset d;
    d.variables = split_line(line, delimiter);
    std::unordered_set<std::string> seen;
    for (const auto& v : d.variables) {
        if (v.empty()) throw InvalidInputError("empty variable name in header");
        if (!seen.insert(v).second) throw InvalidInputError("duplicate variable name: " + v);
    }
    const int p = static_cast<int>(d.variables.size());

    std::vector<double> cells;
    long rows = 0;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_line(line, delimiter);
        if (static_cast<int>(fields.size()) != p) {
            throw InvalidInputError("row " + std::to_string(lineno) + " has " +
                                    std::to_string(fields.size()) + " fields, expected " +
                                    std::to_string(p));
        }
        for (int j = 0; j < p; ++j) {
            double value = 0.0;
            const auto* first = fields[j].data();
            const auto* last = first + fields[j].size();
            const auto [ptr, ec] = std::from_chars(first, last, value);
            if (ec != std::errc{} || ptr != last) {
                throw InvalidInputError("non-numeric cell at row " + std::to_string(lineno) +
                                        ", column " + d.variables[j] + ": '" + fields[j] + "'");
            }
            cells.push_back(value);
        }
        ++rows;
    }
    if (rows < 2) throw InvalidInputError("dataset needs at least 2 rows, got " + std::to_string(rows));
    d.values.resize(rows, p);
    for (long i = 0; i < rows; ++i) {
        for (int j = 0; j < p; ++j) d.values(i, j) = cells[i * p + j];
    }
    return d;
}

Dataset load_dataset(const std::string& path, char delimiter) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInputError("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_dataset(buf.str(), delimiter);
}

std::string dataset_to_text(const Dataset& d, char delimiter) {
    std::ostringstream out;
    out.precision(17);
    for (int j = 0; j < d.num_vars(); ++j) {
        if (j > 0) out << delimiter;
        out << d.variables[j];
    }
    out << '\n';
    for (long i = 0; i < d.num_rows(); ++i) {
        for (int j = 0; j < d.num_vars(); ++j) {
            if (j > 0) out << delimiter;
            out << d.values(i, j);
        }
        out << '\n';
    }
    return out.str();
}

void save_dataset(const std::string& path, const Dataset& d, char delimiter) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInputError("cannot write file: " + path);
    out << dataset_to_text(d, delimiter);
}

}  // namespace pcmax
