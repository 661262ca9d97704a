#include "pcmax/metrics.hpp"

#include "pcmax/errors.hpp"

namespace pcmax {

namespace {

void check_same_nodes(const MixedGraph& truth, const MixedGraph& estimated) {
    if (truth.names() != estimated.names()) {
        throw InvalidInputError("graphs have different node sets");
    }
}

}  // namespace

ConfusionCounts adjacency_confusion(const MixedGraph& truth, const MixedGraph& estimated) {
    check_same_nodes(truth, estimated);
    ConfusionCounts c;
    for (const Edge& e : estimated.edges()) {
        (truth.is_adjacent(e.a, e.b) ? c.tp : c.fp) += 1;
    }
    for (const Edge& e : truth.edges()) {
        if (!estimated.is_adjacent(e.a, e.b)) c.fn += 1;
    }
    return c;
}

ConfusionCounts arrowhead_confusion(const MixedGraph& truth, const MixedGraph& estimated) {
    check_same_nodes(truth, estimated);
    ConfusionCounts c;
    const auto count_heads = [](const MixedGraph& from, const MixedGraph& against, long& hit,
                                long& miss) {
        for (const Edge& e : from.edges()) {
            if (e.at_b == Endpoint::Arrow) {
                (against.has_arrow_at(e.a, e.b) ? hit : miss) += 1;
            }
            if (e.at_a == Endpoint::Arrow) {
                (against.has_arrow_at(e.b, e.a) ? hit : miss) += 1;
            }
        }
    };
    count_heads(estimated, truth, c.tp, c.fp);
    long tp_again = 0;
    count_heads(truth, estimated, tp_again, c.fn);
    return c;
}

std::pair<std::optional<double>, std::optional<double>> precision_recall(const ConfusionCounts& c) {
    std::optional<double> precision, recall;
    if (c.tp + c.fp > 0) precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    if (c.tp + c.fn > 0) recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    return {precision, recall};
}

double bidirected_fraction(const MixedGraph& estimated) {
    const auto edges = estimated.edges();
    if (edges.empty()) return 0.0;
    long bidirected = 0;
    for (const Edge& e : edges) {
        if (e.at_a == Endpoint::Arrow && e.at_b == Endpoint::Arrow) ++bidirected;
    }
    return static_cast<double>(bidirected) / static_cast<double>(edges.size());
}

MetricsRecord evaluate(const MixedGraph& true_pattern, const MixedGraph& estimated,
                       double elapsed_seconds) {
    MetricsRecord m;
    std::tie(m.ap, m.ar) = precision_recall(adjacency_confusion(true_pattern, estimated));
    std::tie(m.ahp, m.ahr) = precision_recall(arrowhead_confusion(true_pattern, estimated));
    m.bid = bidirected_fraction(estimated);
    m.elapsed_seconds = elapsed_seconds;
    return m;
}

}  // namespace pcmax
