#pragma once

#include <istream>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace egonet {

// Simple undirected graph, CSR adjacency, dense 0-based node ids.
class Graph {
 public:
  Graph() = default;

  // Validates: ids in [0, n), no self-loops, no duplicate edges.
  static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

  int num_nodes() const { return n_; }
  int num_edges() const { return static_cast<int>(adj_.size() / 2); }
  int degree(int u) const { return offsets_[u + 1] - offsets_[u]; }
  int max_degree() const;
  double mean_degree() const;

  std::span<const int> neighbors(int u) const {
    return {adj_.data() + offsets_[u], adj_.data() + offsets_[u + 1]};
  }

  bool has_edge(int u, int v) const;

  // Sorted "u v" lines preceded by a "# n=<count>" hint so isolated trailing
  // nodes survive a round trip.
  std::string to_edge_list() const;

  // Edges as sorted (u, v) pairs with u < v.
  std::vector<std::pair<int, int>> edge_pairs() const;

  // New graph with node i renamed perm[i].
  Graph permuted(const std::vector<int>& perm) const;

 private:
  int n_ = 0;
  std::vector<int> offsets_;
  std::vector<int> adj_;
};

struct ParseOptions {
  // Expected node count. Ids >= this are rejected. When absent, n = max id + 1
  // (or the "# n=" hint if present).
  std::optional<int> expected_nodes;
  // Remap arbitrary non-negative integer ids to dense 0-based ids in
  // first-occurrence order.
  bool relabel = false;
};

// Parses "u v" lines; '#' starts a comment, blank lines are skipped. Errors
// carry 1-based line numbers.
Graph load_edge_list(std::istream& in, const ParseOptions& opts = {});
Graph load_edge_list(const std::string& text, const ParseOptions& opts = {});
Graph load_edge_list_file(const std::string& path, const ParseOptions& opts = {});

// Integer node labels over a finite alphabet. The alphabet always contains 0
// because unmentioned nodes default to label 0.
class NodeFeatures {
 public:
  NodeFeatures() = default;
  NodeFeatures(int n, std::vector<int> labels);

  static NodeFeatures uniform(int n);  // all labels 0

  // Parses "node_id label" lines; nodes not mentioned get label 0.
  static NodeFeatures load(std::istream& in, int n);
  static NodeFeatures load(const std::string& text, int n);
  static NodeFeatures load_file(const std::string& path, int n);

  int size() const { return static_cast<int>(labels_.size()); }
  int label(int u) const { return labels_[u]; }
  const std::vector<int>& alphabet() const { return alphabet_; }
  // Index of a node's label in the sorted alphabet (one-hot column).
  int alphabet_index(int u) const;

  NodeFeatures permuted(const std::vector<int>& perm) const;

 private:
  std::vector<int> labels_;
  std::vector<int> alphabet_;  // sorted, unique, contains 0
};

// A graph viewed from a distinguished node. Non-owning.
struct RootedGraph {
  const Graph* graph = nullptr;
  int root = 0;
};

RootedGraph rooted(const Graph& g, int root);

struct GraphEntry {
  std::string name;
  Graph graph;
  NodeFeatures features;
};

// Ordered list of named graphs; names must be unique.
class GraphCollection {
 public:
  void add(std::string name, Graph g, NodeFeatures f);
  void add(std::string name, Graph g);  // uniform features

  int size() const { return static_cast<int>(entries_.size()); }
  const GraphEntry& operator[](int i) const { return entries_[i]; }
  const std::vector<GraphEntry>& entries() const { return entries_; }

 private:
  std::vector<GraphEntry> entries_;
};

}  // namespace egonet
