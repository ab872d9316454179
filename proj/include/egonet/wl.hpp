#pragma once

#include <string>
#include <vector>

#include "egonet/graph.hpp"
#include "egonet/report.hpp"

namespace egonet {

// Colors per refinement iteration for one graph: colors[t][u] is node u's
// color after t rounds. Iteration 0 is the feature partition; iteration t+1
// hashes (own color, multiset of neighbor colors) through a collision-checked
// interning table, so equal colors mean equal depth-t unrolled neighborhoods.
struct ColorAssignment {
  std::vector<std::vector<int>> colors;
  int iterations() const { return static_cast<int>(colors.size()) - 1; }
};

ColorAssignment refine(const Graph& g, const NodeFeatures& f, int iterations);

// Joint refinement with one interning table, so colors are comparable across
// graphs.
struct CollectionRefinement {
  std::vector<ColorAssignment> per_graph;
  std::vector<long long> node_classes;  // distinct colors per iteration, pooled
};

CollectionRefinement refine_collection(const GraphCollection& c, int iterations);

// Distinct pooled node colors per iteration 0..K.
EquivalenceReport count_node_classes(const GraphCollection& c, int iterations,
                                     bool with_sizes = false);
// Distinct per-graph color histograms per iteration 0..K.
EquivalenceReport count_graph_classes(const GraphCollection& c, int iterations,
                                      bool with_sizes = false);

// Mean train label per color; unseen colors fall back to the supplied value
// (callers pass the global train mean).
class TabularPredictor {
 public:
  static TabularPredictor fit(const std::vector<int>& colors, const std::vector<double>& labels,
                              double fallback);
  double predict(int color) const;

 private:
  std::vector<std::pair<int, double>> mean_by_color_;  // sorted by color
  double fallback_ = 0.0;
};

}  // namespace egonet
