#pragma once

#include <iosfwd>
#include <set>
#include <string>

#include "pcmax/graph.hpp"

namespace pcmax {

struct TextGraph {
    MixedGraph graph;
    std::set<Triple> ambiguous;
};

/// Render a graph in the text format:
///
///   Graph Nodes:
///   X1;X2;X3
///
///   Graph Edges:
///   1. X1 --> X2
///   2. X2 --- X3
///
///   Ambiguous triples:
///   X1,X2,X3
///
/// Glyphs: `-->` directed, `---` undirected, `<->` bidirected. The
/// "Ambiguous triples:" section appears only when nonempty.
std::string graph_to_text(const MixedGraph& g, const std::set<Triple>& ambiguous = {});

TextGraph parse_graph_text(const std::string& text);

void write_graph_file(const std::string& path, const MixedGraph& g,
                      const std::set<Triple>& ambiguous = {});
TextGraph read_graph_file(const std::string& path);

}  // namespace pcmax
