#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pcmax/benchmark.hpp"
#include "pcmax/correlation.hpp"
#include "pcmax/dataset.hpp"
#include "pcmax/errors.hpp"
#include "pcmax/graph.hpp"
#include "pcmax/graph_io.hpp"
#include "pcmax/indep.hpp"
#include "pcmax/metrics.hpp"
#include "pcmax/search.hpp"
#include "pcmax/sim.hpp"

namespace py = pybind11;
using namespace pcmax;

namespace {

Dataset dataset_from_numpy(const std::vector<std::string>& names,
                           const Eigen::Ref<const Eigen::MatrixXd>& values) {
    if (static_cast<int>(names.size()) != values.cols()) {
        throw InvalidInputError("column count does not match variable names");
    }
    Dataset d;
    d.variables = names;
    d.values = values;
    return d;
}

std::unique_ptr<IndependenceTest> make_test(const Dataset& data, const std::string& test,
                                            double alpha, double penalty) {
    switch (test_kind_from_string(test)) {
        case TestKind::FisherZ:
            return std::make_unique<FisherZTest>(correlation(data), alpha);
        case TestKind::BicDiff:
            return std::make_unique<BicDiffTest>(data, penalty);
        case TestKind::Oracle:
            throw InvalidInputError("oracle test needs a true graph, not a dataset");
    }
    throw InternalError("bad test enum");
}

py::dict search_result_dict(const SearchResult& result) {
    py::dict out;
    out["graph"] = result.graph;
    py::list ambiguous;
    for (const Triple& t : result.ambiguous) {
        ambiguous.append(py::make_tuple(t.x, t.y, t.z));
    }
    out["ambiguous"] = ambiguous;
    out["elapsed_seconds"] = result.elapsed_seconds;
    return out;
}

py::dict metrics_dict(const MetricsRecord& m) {
    py::dict out;
    out["ap"] = m.ap ? py::cast(*m.ap) : py::none();
    out["ar"] = m.ar ? py::cast(*m.ar) : py::none();
    out["ahp"] = m.ahp ? py::cast(*m.ahp) : py::none();
    out["ahr"] = m.ahr ? py::cast(*m.ahr) : py::none();
    out["bid"] = m.bid;
    out["elapsed_seconds"] = m.elapsed_seconds;
    return out;
}

}  // namespace

PYBIND11_MODULE(_pcmax, m) {
    m.doc() = "PC-family causal structure learning";

    py::register_exception<InvalidInputError>(m, "InvalidInputError", PyExc_ValueError);
    py::register_exception<DegenerateDataError>(m, "DegenerateDataError", PyExc_ValueError);

    py::class_<MixedGraph>(m, "Graph")
        .def(py::init<std::vector<std::string>>(), py::arg("names"))
        .def_property_readonly("num_nodes", &MixedGraph::num_nodes)
        .def_property_readonly("num_edges", &MixedGraph::num_edges)
        .def("names", &MixedGraph::names)
        .def("index_of", &MixedGraph::index_of, py::arg("name"))
        .def("is_adjacent", &MixedGraph::is_adjacent, py::arg("a"), py::arg("b"))
        .def("adjacents", &MixedGraph::adjacents, py::arg("v"))
        .def("add_directed", &MixedGraph::add_directed, py::arg("src"), py::arg("dst"))
        .def("add_undirected", &MixedGraph::add_undirected, py::arg("a"), py::arg("b"))
        .def("remove_edge", &MixedGraph::remove_edge, py::arg("a"), py::arg("b"))
        .def("is_directed", &MixedGraph::is_directed, py::arg("src"), py::arg("dst"))
        .def("is_undirected", &MixedGraph::is_undirected, py::arg("a"), py::arg("b"))
        .def("is_bidirected", &MixedGraph::is_bidirected, py::arg("a"), py::arg("b"))
        .def("parents", &MixedGraph::parents, py::arg("v"))
        .def("edges",
             [](const MixedGraph& g) {
                 py::list out;
                 for (const Edge& e : g.edges()) {
                     const char* glyph = "---";
                     int a = e.a, b = e.b;
                     if (e.at_a == Endpoint::Arrow && e.at_b == Endpoint::Arrow) {
                         glyph = "<->";
                     } else if (e.at_b == Endpoint::Arrow) {
                         glyph = "-->";
                     } else if (e.at_a == Endpoint::Arrow) {
                         glyph = "-->";
                         std::swap(a, b);
                     }
                     out.append(py::make_tuple(g.name(a), glyph, g.name(b)));
                 }
                 return out;
             })
        .def("__eq__", [](const MixedGraph& a, const MixedGraph& b) { return a == b; })
        .def("__repr__", [](const MixedGraph& g) {
            return "<Graph with " + std::to_string(g.num_nodes()) + " nodes, " +
                   std::to_string(g.num_edges()) + " edges>";
        });

    m.def("graph_to_text",
          [](const MixedGraph& g) { return graph_to_text(g); }, py::arg("graph"));
    m.def("parse_graph_text",
          [](const std::string& text) { return parse_graph_text(text).graph; }, py::arg("text"));

    m.def("dag_to_cpdag", &dag_to_cpdag, py::arg("dag"));
    m.def(
        "d_separated",
        [](const MixedGraph& dag, int x, int y, const std::vector<int>& s) {
            return d_separated(dag, x, y, s);
        },
        py::arg("dag"), py::arg("x"), py::arg("y"), py::arg("s") = std::vector<int>{});
    m.def("topological_order", &topological_order, py::arg("dag"));

    m.def(
        "random_dag",
        [](int num_nodes, double avg_degree, std::uint64_t seed) {
            return random_dag(RandomGraphConfig{num_nodes, avg_degree, seed});
        },
        py::arg("num_nodes"), py::arg("avg_degree"), py::arg("seed"));

    m.def(
        "simulate",
        [](const MixedGraph& dag, long n, std::uint64_t param_seed, std::uint64_t data_seed) {
            const Dataset d = simulate(parameterize(dag, param_seed), n, data_seed);
            return py::make_tuple(d.variables, d.values);
        },
        py::arg("dag"), py::arg("n"), py::arg("param_seed"), py::arg("data_seed"),
        "Parameterize the DAG and draw n cases; returns (names, values).");

    m.def(
        "search",
        [](const std::vector<std::string>& names, const Eigen::Ref<const Eigen::MatrixXd>& values,
           const std::string& algorithm, const std::string& test, double alpha, double penalty,
           int max_depth, int threads) {
            const Dataset data = dataset_from_numpy(names, values);
            const auto t = make_test(data, test, alpha, penalty);
            SearchConfig config{algorithm_from_string(algorithm), alpha, penalty, max_depth,
                                threads};
            return search_result_dict(run_search(config, *t));
        },
        py::arg("names"), py::arg("values"), py::arg("algorithm") = "pc-max",
        py::arg("test") = "fisher-z", py::arg("alpha") = 0.001, py::arg("penalty") = 4.0,
        py::arg("max_depth") = -1, py::arg("threads") = 1);

    m.def(
        "search_oracle",
        [](const MixedGraph& dag, const std::string& algorithm, int max_depth) {
            const OracleTest oracle(dag);
            SearchConfig config;
            config.algorithm = algorithm_from_string(algorithm);
            config.max_depth = max_depth;
            return search_result_dict(run_search(config, oracle));
        },
        py::arg("dag"), py::arg("algorithm") = "pc-max", py::arg("max_depth") = -1,
        "Run a search against the d-separation oracle of a known DAG.");

    m.def(
        "evaluate",
        [](const MixedGraph& true_dag, const MixedGraph& estimated) {
            return metrics_dict(evaluate(dag_to_cpdag(true_dag), estimated, 0.0));
        },
        py::arg("true_dag"), py::arg("estimated"),
        "Adjacency and arrowhead precision/recall against the pattern of the true DAG.");
}
