#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "egonet/graph.hpp"
#include "egonet/numeric.hpp"
#include "egonet/rng.hpp"

namespace test_util {

inline egonet::Graph random_graph(int n, double p, egonet::Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.bernoulli(p)) edges.emplace_back(i, j);
    }
  }
  return egonet::Graph::from_edges(n, edges);
}

inline std::vector<int> random_labels(int n, int alphabet, egonet::Rng& rng) {
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) out[i] = static_cast<int>(rng.below(alphabet));
  return out;
}

inline std::vector<int> random_permutation(int n, egonet::Rng& rng) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);
  return perm;
}

// Exhaustive featured-isomorphism test for small graphs.
inline bool isomorphic_brute(const egonet::Graph& a, const egonet::NodeFeatures& fa,
                             const egonet::Graph& b, const egonet::NodeFeatures& fb) {
  int n = a.num_nodes();
  if (b.num_nodes() != n || a.num_edges() != b.num_edges()) return false;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  auto edges_b = b.edge_pairs();
  std::sort(edges_b.begin(), edges_b.end());
  do {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      if (fa.label(i) != fb.label(perm[i])) ok = false;
    }
    if (!ok) continue;
    std::vector<std::pair<int, int>> mapped;
    for (auto [u, v] : a.edge_pairs()) {
      int x = perm[u], y = perm[v];
      mapped.emplace_back(std::min(x, y), std::max(x, y));
    }
    std::sort(mapped.begin(), mapped.end());
    if (mapped == edges_b) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// Dense multiplication oracle: entry-exact adjacency powers as BigInt.
inline std::vector<std::vector<egonet::BigInt>> dense_adjacency_power(const egonet::Graph& g,
                                                                      int k) {
  int n = g.num_nodes();
  std::vector<std::vector<egonet::BigInt>> id(n, std::vector<egonet::BigInt>(n, 0));
  for (int i = 0; i < n; ++i) id[i][i] = 1;
  std::vector<std::vector<egonet::BigInt>> adj(n, std::vector<egonet::BigInt>(n, 0));
  for (auto [u, v] : g.edge_pairs()) {
    adj[u][v] = 1;
    adj[v][u] = 1;
  }
  auto mul = [n](const auto& x, const auto& y) {
    std::vector<std::vector<egonet::BigInt>> out(n, std::vector<egonet::BigInt>(n, 0));
    for (int i = 0; i < n; ++i) {
      for (int t = 0; t < n; ++t) {
        if (x[i][t] == 0) continue;
        for (int j = 0; j < n; ++j) out[i][j] += x[i][t] * y[t][j];
      }
    }
    return out;
  };
  auto result = id;
  for (int i = 0; i < k; ++i) result = mul(result, adj);
  return result;
}

// BFS distances from every node; unreachable = -1.
inline std::vector<std::vector<int>> all_pairs_distances(const egonet::Graph& g) {
  int n = g.num_nodes();
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
  for (int s = 0; s < n; ++s) {
    dist[s][s] = 0;
    std::vector<int> frontier{s};
    int d = 0;
    while (!frontier.empty()) {
      std::vector<int> next;
      ++d;
      for (int u : frontier) {
        for (int v : g.neighbors(u)) {
          if (dist[s][v] == -1) {
            dist[s][v] = d;
            next.push_back(v);
          }
        }
      }
      frontier = std::move(next);
    }
  }
  return dist;
}

}  // namespace test_util
