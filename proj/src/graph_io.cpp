#include "pcmax/graph_io.hpp"

#include <array>
#include <fstream>
#include <tuple>
#include <sstream>

#include "pcmax/errors.hpp"

namespace pcmax {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char delim) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, delim)) out.push_back(trim(item));
    if (!s.empty() && s.back() == delim) out.push_back("");
    return out;
}

int node_or_throw(const MixedGraph& g, const std::string& name, const std::string& line) {
    const int v = g.index_of(name);
    if (v < 0) throw InvalidInputError("unknown node '" + name + "' in line: " + line);
    return v;
}

}  // namespace

std::string graph_to_text(const MixedGraph& g, const std::set<Triple>& ambiguous) {
    std::ostringstream out;
    out << "Graph Nodes:\n";
    for (int v = 0; v < g.num_nodes(); ++v) {
        if (v > 0) out << ';';
        out << g.name(v);
    }
    out << "\n\nGraph Edges:\n";
    int count = 0;
    for (const Edge& e : g.edges()) {
        out << ++count << ". ";
        if (e.at_a == Endpoint::Tail && e.at_b == Endpoint::Tail) {
            out << g.name(e.a) << " --- " << g.name(e.b);
        } else if (e.at_a == Endpoint::Arrow && e.at_b == Endpoint::Arrow) {
            out << g.name(e.a) << " <-> " << g.name(e.b);
        } else if (e.at_b == Endpoint::Arrow) {
            out << g.name(e.a) << " --> " << g.name(e.b);
        } else {
            out << g.name(e.b) << " --> " << g.name(e.a);
        }
        out << '\n';
    }
    if (!ambiguous.empty()) {
        out << "\nAmbiguous triples:\n";
        for (const Triple& t : ambiguous) {
            out << g.name(t.x) << ',' << g.name(t.y) << ',' << g.name(t.z) << '\n';
        }
    }
    return out.str();
}

TextGraph parse_graph_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    enum class Section { Preamble, Nodes, Edges, Triples } section = Section::Preamble;

    std::vector<std::string> names;
    bool have_names = false;
    std::vector<std::tuple<std::string, std::string, std::string>> edge_specs;
    std::vector<std::array<std::string, 3>> triple_specs;

    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t == "Graph Nodes:") {
            section = Section::Nodes;
            continue;
        }
        if (t == "Graph Edges:") {
            section = Section::Edges;
            continue;
        }
        if (t == "Ambiguous triples:") {
            section = Section::Triples;
            continue;
        }
        if (t.empty()) continue;
        switch (section) {
            case Section::Preamble:
                throw InvalidInputError("unexpected content before 'Graph Nodes:': " + t);
            case Section::Nodes:
                if (have_names) throw InvalidInputError("multiple node lines");
                names = split(t, ';');
                have_names = true;
                break;
            case Section::Edges: {
                // "N. A GLYPH B"
                const auto dot = t.find(". ");
                if (dot == std::string::npos) throw InvalidInputError("malformed edge line: " + t);
                std::istringstream es(t.substr(dot + 2));
                std::string a, glyph, b;
                if (!(es >> a >> glyph >> b)) throw InvalidInputError("malformed edge line: " + t);
                edge_specs.emplace_back(a, glyph, b);
                break;
            }
            case Section::Triples: {
                const auto parts = split(t, ',');
                if (parts.size() != 3) throw InvalidInputError("malformed triple line: " + t);
                triple_specs.push_back({parts[0], parts[1], parts[2]});
                break;
            }
        }
    }
    if (!have_names) throw InvalidInputError("missing 'Graph Nodes:' section");

    TextGraph result{MixedGraph(names), {}};
    MixedGraph& g = result.graph;
    for (const auto& [a, glyph, b] : edge_specs) {
        const int va = node_or_throw(g, a, a + " " + glyph + " " + b);
        const int vb = node_or_throw(g, b, a + " " + glyph + " " + b);
        if (glyph == "---") {
            g.add_undirected(va, vb);
        } else if (glyph == "-->") {
            g.add_directed(va, vb);
        } else if (glyph == "<->") {
            g.add_edge(va, vb, Endpoint::Arrow, Endpoint::Arrow);
        } else {
            throw InvalidInputError("unknown edge glyph: " + glyph);
        }
    }
    for (const auto& spec : triple_specs) {
        result.ambiguous.insert(Triple::canonical(node_or_throw(g, spec[0], spec[0]),
                                                  node_or_throw(g, spec[1], spec[1]),
                                                  node_or_throw(g, spec[2], spec[2])));
    }
    return result;
}

void write_graph_file(const std::string& path, const MixedGraph& g,
                      const std::set<Triple>& ambiguous) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInputError("cannot write file: " + path);
    out << graph_to_text(g, ambiguous);
}

TextGraph read_graph_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInputError("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_graph_text(buf.str());
}

}  // namespace pcmax
