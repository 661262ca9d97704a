#pragma once

#include <optional>
#include <string>

#include "pcmax/graph.hpp"

namespace pcmax {

struct ConfusionCounts {
    long tp = 0;
    long fp = 0;
    long fn = 0;
};

/// Precision/recall and bidirected fraction for one run. Ratios are absent
/// when their denominator is zero (rendered as "NA" externally).
struct MetricsRecord {
    std::optional<double> ap, ar, ahp, ahr;
    double bid = 0.0;
    double elapsed_seconds = 0.0;
};

/// Counts over unordered adjacent pairs, ignoring orientation.
ConfusionCounts adjacency_confusion(const MixedGraph& truth, const MixedGraph& estimated);

/// Counts over directed endpoints: an estimated arrowhead at y on edge
/// (x, y) is a true positive iff the true pattern has that edge with an
/// arrowhead at y. A bidirected estimated edge can contribute one tp and
/// one fp at once.
ConfusionCounts arrowhead_confusion(const MixedGraph& truth, const MixedGraph& estimated);

/// (precision, recall) = (tp/(tp+fp), tp/(tp+fn)); absent on zero denominator.
std::pair<std::optional<double>, std::optional<double>> precision_recall(const ConfusionCounts& c);

/// Fraction of edges that are bidirected; 0.0 for an edgeless graph.
double bidirected_fraction(const MixedGraph& estimated);

/// All of the above against the pattern of the true graph.
MetricsRecord evaluate(const MixedGraph& true_pattern, const MixedGraph& estimated,
                       double elapsed_seconds);

}  // namespace pcmax
