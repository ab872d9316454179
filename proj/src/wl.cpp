#include "egonet/wl.hpp"

#include <algorithm>
#include <unordered_map>

#include "egonet/errors.hpp"

namespace egonet {

namespace {

struct VecHash {
  size_t operator()(const std::vector<int>& v) const {
    size_t h = 1469598103934665603ull;
    for (int x : v) {
      h ^= static_cast<size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

// Dense ids in first-occurrence order. The map compares full keys, so equal
// ids always mean equal keys (hashes only pick the bucket).
class Interner {
 public:
  int id(std::vector<int> key) {
    auto [it, inserted] = table_.try_emplace(std::move(key), static_cast<int>(table_.size()));
    return it->second;
  }
  long long size() const { return static_cast<long long>(table_.size()); }

 private:
  std::unordered_map<std::vector<int>, int, VecHash> table_;
};

}  // namespace

CollectionRefinement refine_collection(const GraphCollection& c, int iterations) {
  if (iterations < 0) throw ValidationError("iteration count must be >= 0");
  CollectionRefinement out;
  out.per_graph.resize(c.size());
  for (int gi = 0; gi < c.size(); ++gi) {
    out.per_graph[gi].colors.assign(iterations + 1,
                                    std::vector<int>(c[gi].graph.num_nodes(), 0));
  }

  {
    Interner base;
    for (int gi = 0; gi < c.size(); ++gi) {
      const auto& f = c[gi].features;
      for (int u = 0; u < f.size(); ++u) {
        out.per_graph[gi].colors[0][u] = base.id({f.label(u)});
      }
    }
    out.node_classes.push_back(base.size());
  }

  for (int t = 1; t <= iterations; ++t) {
    Interner round;
    for (int gi = 0; gi < c.size(); ++gi) {
      const Graph& g = c[gi].graph;
      const auto& prev = out.per_graph[gi].colors[t - 1];
      auto& cur = out.per_graph[gi].colors[t];
      for (int u = 0; u < g.num_nodes(); ++u) {
        std::vector<int> key;
        key.reserve(g.degree(u) + 1);
        key.push_back(prev[u]);
        for (int v : g.neighbors(u)) key.push_back(prev[v]);
        std::sort(key.begin() + 1, key.end());
        cur[u] = round.id(std::move(key));
      }
    }
    out.node_classes.push_back(round.size());
  }
  return out;
}

ColorAssignment refine(const Graph& g, const NodeFeatures& f, int iterations) {
  GraphCollection c;
  c.add("g", g, f);
  return refine_collection(c, iterations).per_graph[0];
}

namespace {

std::optional<std::vector<long long>> class_sizes(const std::vector<int>& keys, bool wanted) {
  if (!wanted) return std::nullopt;
  std::unordered_map<int, long long> counts;
  for (int k : keys) ++counts[k];
  std::vector<long long> sizes;
  sizes.reserve(counts.size());
  for (auto [k, n] : counts) sizes.push_back(n);
  std::sort(sizes.rbegin(), sizes.rend());
  return sizes;
}

}  // namespace

EquivalenceReport count_node_classes(const GraphCollection& c, int iterations, bool with_sizes) {
  auto ref = refine_collection(c, iterations);
  EquivalenceReport rep;
  rep.scope = "node";
  rep.method = "GNN";
  for (int t = 0; t <= iterations; ++t) {
    rep.per_k.push_back({t, ref.node_classes[t]});
  }
  std::vector<int> last;
  for (const auto& ca : ref.per_graph) {
    last.insert(last.end(), ca.colors[iterations].begin(), ca.colors[iterations].end());
  }
  rep.sizes = class_sizes(last, with_sizes);
  return rep;
}

EquivalenceReport count_graph_classes(const GraphCollection& c, int iterations, bool with_sizes) {
  auto ref = refine_collection(c, iterations);
  EquivalenceReport rep;
  rep.scope = "graph";
  rep.method = "GNN";
  std::vector<int> last_keys;
  for (int t = 0; t <= iterations; ++t) {
    Interner keys;
    std::vector<int> graph_keys;
    for (const auto& ca : ref.per_graph) {
      std::vector<int> hist = ca.colors[t];
      std::sort(hist.begin(), hist.end());
      graph_keys.push_back(keys.id(std::move(hist)));
    }
    rep.per_k.push_back({t, keys.size()});
    if (t == iterations) last_keys = std::move(graph_keys);
  }
  rep.sizes = class_sizes(last_keys, with_sizes);
  return rep;
}

TabularPredictor TabularPredictor::fit(const std::vector<int>& colors,
                                       const std::vector<double>& labels, double fallback) {
  if (colors.size() != labels.size()) throw ValidationError("colors/labels size mismatch");
  std::unordered_map<int, std::pair<double, long long>> acc;
  for (size_t i = 0; i < colors.size(); ++i) {
    auto& [sum, cnt] = acc[colors[i]];
    sum += labels[i];
    ++cnt;
  }
  TabularPredictor p;
  p.fallback_ = fallback;
  p.mean_by_color_.reserve(acc.size());
  for (auto& [color, sc] : acc) {
    p.mean_by_color_.push_back({color, sc.first / sc.second});
  }
  std::sort(p.mean_by_color_.begin(), p.mean_by_color_.end());
  return p;
}

double TabularPredictor::predict(int color) const {
  auto it = std::lower_bound(mean_by_color_.begin(), mean_by_color_.end(),
                             std::pair<int, double>{color, -1e300});
  if (it != mean_by_color_.end() && it->first == color) return it->second;
  return fallback_;
}

}  // namespace egonet
