#include "egonet/constructions.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "egonet/errors.hpp"
#include "egonet/gamlp.hpp"
#include "egonet/walks.hpp"
#include "egonet/wl.hpp"

namespace egonet {

Graph cycle_graph(int n) {
  if (n < 3) throw ValidationError("cycle needs n >= 3");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph::from_edges(n, edges);
}

Graph complete_graph(int n) {
  if (n < 1) throw ValidationError("complete graph needs n >= 1");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return Graph::from_edges(n, edges);
}

Graph hypercube_graph(int dim) {
  if (dim < 1 || dim > 20) throw ValidationError("hypercube dimension out of range");
  int n = 1 << dim;
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u) {
    for (int b = 0; b < dim; ++b) {
      int v = u ^ (1 << b);
      if (u < v) edges.emplace_back(u, v);
    }
  }
  return Graph::from_edges(n, edges);
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  std::vector<std::pair<int, int>> edges = a.edge_pairs();
  for (auto [u, v] : b.edge_pairs()) edges.emplace_back(u + a.num_nodes(), v + a.num_nodes());
  return Graph::from_edges(a.num_nodes() + b.num_nodes(), edges);
}

// ---------------------------------------------------------------------------

std::string FeaturedTree::canonical() {
  std::vector<std::string> keys;
  keys.reserve(children.size());
  for (auto& ch : children) keys.push_back(ch.canonical());
  std::vector<size_t> order(children.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return keys[a] < keys[b]; });
  std::vector<FeaturedTree> sorted;
  sorted.reserve(children.size());
  std::string out = "(" + std::to_string(feature);
  for (size_t idx : order) {
    sorted.push_back(std::move(children[idx]));
    out += keys[idx];
  }
  children = std::move(sorted);
  out += ")";
  return out;
}

std::string FeaturedTree::serialize() const {
  std::string out = "(" + std::to_string(feature);
  for (const auto& ch : children) out += ch.serialize();
  return out + ")";
}

int FeaturedTree::depth() const {
  int d = 0;
  for (const auto& ch : children) d = std::max(d, 1 + ch.depth());
  return d;
}

int FeaturedTree::size() const {
  int s = 1;
  for (const auto& ch : children) s += ch.size();
  return s;
}

TreeGraph tree_to_graph(const FeaturedTree& t) {
  std::vector<int> labels;
  std::vector<std::pair<int, int>> edges;
  std::queue<std::pair<const FeaturedTree*, int>> q;  // node, parent index
  q.push({&t, -1});
  while (!q.empty()) {
    auto [node, parent] = q.front();
    q.pop();
    int idx = static_cast<int>(labels.size());
    labels.push_back(node->feature);
    if (parent >= 0) edges.emplace_back(parent, idx);
    for (const auto& ch : node->children) q.push({&ch, idx});
  }
  int n = static_cast<int>(labels.size());
  return {Graph::from_edges(n, edges), NodeFeatures(n, labels), 0};
}

BigInt tree_depth_count(const FeaturedTree& t, int k) {
  if (k < 0) throw ValidationError("depth must be >= 0");
  if (k == 0) return 1;
  BigInt total = 0;
  for (const auto& ch : t.children) total += tree_depth_count(ch, k - 1);
  return total;
}

namespace {

BigInt path_count_rec(const FeaturedTree& t, const std::vector<int>& tuple, size_t step) {
  if (step == tuple.size()) return 1;
  BigInt total = 0;
  for (const auto& ch : t.children) {
    if (ch.feature == tuple[step]) total += path_count_rec(ch, tuple, step + 1);
  }
  return total;
}

}  // namespace

BigInt tree_path_attributed_count(const FeaturedTree& t, const std::vector<int>& tuple) {
  if (tuple.empty()) throw ValidationError("tuple must be non-empty");
  return path_count_rec(t, tuple, 0);
}

// ---------------------------------------------------------------------------

namespace {

BigInt binomial(const BigInt& n, int k) {
  if (k < 0 || n < k) return 0;
  BigInt num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    num *= n - i;
    den *= i + 1;
  }
  return num / den;
}

BigInt multiset_count(const BigInt& kinds, int slots) {
  return binomial(kinds + slots - 1, slots);
}

// All multisets of `slots` elements from `kinds`, as non-decreasing index
// tuples.
void for_each_multiset(int kinds, int slots, std::vector<int>& idx,
                       const std::function<void(const std::vector<int>&)>& fn, int from = 0) {
  if (static_cast<int>(idx.size()) == slots) {
    fn(idx);
    return;
  }
  for (int i = from; i < kinds; ++i) {
    idx.push_back(i);
    for_each_multiset(kinds, slots, idx, fn, i);
    idx.pop_back();
  }
}

std::vector<FeaturedTree> leaf_kinds() {
  FeaturedTree zero, one;
  zero.feature = 0;
  one.feature = 1;
  return {zero, one};
}

std::vector<FeaturedTree> expand_kinds(const std::vector<FeaturedTree>& kinds, int fanout) {
  std::vector<FeaturedTree> out;
  std::vector<int> idx;
  for_each_multiset(static_cast<int>(kinds.size()), fanout, idx, [&](const std::vector<int>& pick) {
    for (int f = 0; f <= 1; ++f) {
      FeaturedTree t;
      t.feature = f;
      for (int i : pick) t.children.push_back(kinds[i]);
      out.push_back(std::move(t));
    }
  });
  return out;
}

void check_kind_budget(const BigInt& count, long long budget, const std::string& what) {
  if (count > budget) {
    std::ostringstream os;
    os << what << " would hold " << count.str() << " trees, over the budget of " << budget;
    throw BudgetError(os.str());
  }
}

std::vector<int> zeros_per_level(const FeaturedTree& t, int depth_limit) {
  std::vector<int> zeros(depth_limit + 1, 0);
  std::queue<std::pair<const FeaturedTree*, int>> q;
  q.push({&t, 0});
  while (!q.empty()) {
    auto [node, d] = q.front();
    q.pop();
    if (node->feature == 0) ++zeros[d];
    for (const auto& ch : node->children) q.push({&ch, d + 1});
  }
  return zeros;
}

}  // namespace

EnumerationResult enumerate_agg_trees(int m, int K, long long budget) {
  if (m < 2) throw ValidationError("enumerate_agg_trees needs m >= 2");
  if (K < 0) throw ValidationError("enumerate_agg_trees needs K >= 0");
  EnumerationResult res;
  BigInt exponent = (BigInt(1) << K) - 1;
  res.lower_bound = 1;
  for (BigInt i = 0; i < exponent; ++i) res.lower_bound *= m - 1;

  // Census sizes level by level before materializing anything.
  BigInt kinds_count = 2;
  for (int d = 1; d < K; ++d) {
    kinds_count = 2 * multiset_count(kinds_count, m - 1);
    check_kind_budget(kinds_count, budget, "depth-" + std::to_string(d) + " subtree census");
  }
  BigInt total = K == 0 ? BigInt(2) : 2 * multiset_count(kinds_count, m);
  check_kind_budget(total, budget, "tree census");

  std::vector<FeaturedTree> kinds = leaf_kinds();
  for (int d = 1; d < K; ++d) kinds = expand_kinds(kinds, m - 1);
  res.trees = K == 0 ? kinds : expand_kinds(kinds, m);
  for (auto& t : res.trees) t.canonical();
  res.count = static_cast<long long>(res.trees.size());
  res.bound_satisfied = BigInt(res.count) >= res.lower_bound;
  return res;
}

EnumerationResult enumerate_full_mary(const TreeSpec& spec, long long budget) {
  if (spec.m < 1) throw ValidationError("enumerate_full_mary needs m >= 1");
  if (spec.K < 0) throw ValidationError("enumerate_full_mary needs K >= 0");
  long long level_size = 1;
  if (spec.level_zero_counts) {
    const auto& q = *spec.level_zero_counts;
    if (static_cast<int>(q.size()) != spec.K + 1) {
      throw ValidationError("level_zero_counts must have K+1 entries");
    }
    for (int d = 0; d <= spec.K; ++d) {
      if (q[d] < 0 || q[d] > level_size) {
        throw ValidationError("level_zero_counts[" + std::to_string(d) + "] out of range");
      }
      if (d < spec.K) level_size *= spec.m;
    }
  }

  BigInt kinds_count = 2;
  for (int d = 1; d <= spec.K; ++d) {
    kinds_count = 2 * multiset_count(kinds_count, spec.m);
    check_kind_budget(kinds_count, budget, "depth-" + std::to_string(d) + " subtree census");
  }

  std::vector<FeaturedTree> kinds = leaf_kinds();
  for (int d = 1; d <= spec.K; ++d) kinds = expand_kinds(kinds, spec.m);

  EnumerationResult res;
  res.lower_bound = 0;
  res.bound_satisfied = true;
  for (auto& t : kinds) {
    if (spec.level_zero_counts && zeros_per_level(t, spec.K) != *spec.level_zero_counts) continue;
    t.canonical();
    res.trees.push_back(std::move(t));
  }
  res.count = static_cast<long long>(res.trees.size());
  return res;
}

// ---------------------------------------------------------------------------

namespace {

FeaturedTree build_family_subtree(int depth, int k, int m, bool first_branch,
                                  long long& ones_left) {
  FeaturedTree t;
  if (depth == k) {
    if (ones_left > 0) {
      t.feature = 1;
      --ones_left;
    } else {
      t.feature = 0;
    }
    return t;
  }
  t.feature = depth == 0 ? 0 : (first_branch ? 1 : 0);
  for (int i = 0; i < m; ++i) {
    t.children.push_back(build_family_subtree(depth + 1, k, m, first_branch, ones_left));
  }
  return t;
}

}  // namespace

std::vector<FamilyMember> leaf_shift_family(int m, int k) {
  if (m < 2 || k < 2) throw ValidationError("leaf_shift_family needs m >= 2 and k >= 2");
  long long leaves_per_branch = 1;
  for (int i = 0; i < k - 1; ++i) {
    leaves_per_branch *= m;
    if (leaves_per_branch > 1000000) throw BudgetError("leaf_shift_family too large");
  }
  std::vector<FamilyMember> out;
  for (long long c = 0; c <= leaves_per_branch; ++c) {
    FeaturedTree root;
    root.feature = 0;
    long long first_ones = c;
    long long rest_ones = leaves_per_branch - c;
    root.children.push_back(build_family_subtree(1, k, m, true, first_ones));
    for (int b = 1; b < m; ++b) {
      root.children.push_back(build_family_subtree(1, k, m, false, rest_ones));
    }
    out.push_back({std::move(root), c});
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Graph graph_from_one_based(int n, std::vector<std::pair<int, int>> edges) {
  for (auto& [u, v] : edges) {
    --u;
    --v;
  }
  return Graph::from_edges(n, edges);
}

}  // namespace

GraphCollection walk_symmetric_pair() {
  Graph g = graph_from_one_based(
      14, {{1, 3}, {1, 5}, {1, 7}, {1, 9}, {2, 4}, {2, 6}, {2, 8}, {2, 10},
           {3, 11}, {3, 12}, {4, 13}, {4, 14}, {5, 13}, {6, 11}, {7, 14}, {8, 12}});
  Graph h = graph_from_one_based(
      14, {{1, 5}, {1, 6}, {1, 7}, {1, 8}, {2, 3}, {2, 4}, {2, 9}, {2, 10},
           {3, 11}, {3, 12}, {4, 13}, {4, 14}, {5, 13}, {6, 11}, {7, 14}, {8, 12}});
  GraphCollection c;
  c.add("first", std::move(g));
  c.add("second", std::move(h));
  return c;
}

GraphCollection hexagon_vs_triangles() {
  GraphCollection c;
  c.add("hexagon", cycle_graph(6));
  c.add("triangles", disjoint_union(complete_graph(3), complete_graph(3)));
  return c;
}

GraphCollection cycle_vs_cube() {
  GraphCollection c;
  c.add("cycle8", cycle_graph(8));
  c.add("cube", hypercube_graph(3));
  return c;
}

TreePair feature_swap_trees() {
  // Full binary depth-2 trees; features listed root, children, grandchildren.
  auto build = [](int fa, int fb, std::array<int, 4> leaves) {
    FeaturedTree root;
    root.feature = 0;
    FeaturedTree a, b;
    a.feature = fa;
    b.feature = fb;
    FeaturedTree leaf;
    leaf.feature = leaves[0];
    a.children.push_back(leaf);
    leaf.feature = leaves[1];
    a.children.push_back(leaf);
    leaf.feature = leaves[2];
    b.children.push_back(leaf);
    leaf.feature = leaves[3];
    b.children.push_back(leaf);
    root.children.push_back(std::move(a));
    root.children.push_back(std::move(b));
    return tree_to_graph(root);
  };
  TreePair pair;
  pair.first = build(1, 0, {1, 0, 0, 0});
  pair.second = build(1, 0, {0, 0, 1, 0});
  return pair;
}

// ---------------------------------------------------------------------------

namespace {

CheckResult make_check(std::string name, bool pass, std::string detail) {
  return {std::move(name), pass, std::move(detail)};
}

std::vector<BigInt> node_walk_counts(const Graph& g, int k) { return walk_counts(g, k); }

std::vector<CheckResult> verify_walk_symmetric_pair() {
  GraphCollection c = walk_symmetric_pair();
  const Graph& g = c[0].graph;
  const Graph& h = c[1].graph;
  std::vector<CheckResult> out;

  bool per_node_equal = true;
  bool symmetries = true;
  for (int k = 1; k <= 64; ++k) {
    std::vector<BigInt> wg = node_walk_counts(g, k);
    std::vector<BigInt> wh = node_walk_counts(h, k);
    for (int i = 0; i < 14; ++i) {
      if (wg[i] != wh[i]) per_node_equal = false;
    }
    // 1-based identities w(1)=w(2), w(3)+w(9)=w(6)+w(8), w(5)+w(7)=w(4)+w(10),
    // checked in both graphs (indices below are 0-based).
    for (const auto& w : {wg, wh}) {
      if (w[0] != w[1]) symmetries = false;
      if (w[2] + w[8] != w[5] + w[7]) symmetries = false;
      if (w[4] + w[6] != w[3] + w[9]) symmetries = false;
    }
  }
  out.push_back(make_check("node_walk_counts_equal_up_to_64", per_node_equal,
                           "length-k walk counts from every node match across the pair "
                           "for k = 1..64, so adjacency-power features cannot separate it"));
  out.push_back(make_check("node_walk_symmetries", symmetries,
                           "w(1)=w(2), w(3)+w(9)=w(6)+w(8), w(5)+w(7)=w(4)+w(10) on both"));

  EquivalenceReport rep = count_graph_classes(c, 2);
  bool merged_at_1 = rep.per_k[1].classes == 1;
  bool split_at_2 = rep.per_k[2].classes == 2;
  out.push_back(make_check("refinement_merges_at_1", merged_at_1,
                           "one graph class after a single refinement round"));
  out.push_back(make_check("refinement_splits_at_2", split_at_2,
                           "two graph classes after two refinement rounds"));
  return out;
}

std::vector<CheckResult> verify_hexagon_vs_triangles() {
  GraphCollection c = hexagon_vs_triangles();
  std::vector<CheckResult> out;

  EquivalenceReport rep = count_graph_classes(c, 10);
  bool merged = true;
  for (const auto& row : rep.per_k) {
    if (row.classes != 1) merged = false;
  }
  out.push_back(make_check("refinement_never_splits", merged,
                           "one graph class at every round up to 10"));

  OperatorFamily dist2 = OperatorFamily::parse("dist(2)");
  EquivalenceReport rd = gamlp_graph_classes(c, dist2, KeyMode::ExactFeatures,
                                             Tower::ExactInteger);
  out.push_back(make_check("distance2_splits", rd.per_k.back().classes == 2,
                           "dist(2) features give two graph classes"));

  OperatorFamily minpow2 = OperatorFamily::parse("minpow(2)");
  EquivalenceReport rm = gamlp_graph_classes(c, minpow2, KeyMode::ExactFeatures,
                                             Tower::ExactInteger);
  out.push_back(make_check("binarized_power2_merges", rm.per_k.back().classes == 1,
                           "min(A^2, 1) features give one graph class"));
  return out;
}

std::vector<CheckResult> verify_cycle_vs_cube() {
  GraphCollection c = cycle_vs_cube();
  std::vector<CheckResult> out;

  bool all_one = true;
  SurdValue unit;
  unit[1] = 1;
  for (const auto& entry : c.entries()) {
    auto feats = exact_normalized_features(entry.graph, entry.features, BigRat(1, 2),
                                           BigRat(1, 2), 5);
    for (const auto& row : feats) {
      for (const auto& cell : row) {
        if (cell != unit) all_one = false;
      }
    }
  }
  out.push_back(make_check("normalized_features_all_one", all_one,
                           "exact (D^-1/2 A D^-1/2)^k X entries equal 1 for k = 1..5"));

  EquivalenceReport rep = count_graph_classes(c, 1);
  out.push_back(make_check("refinement_splits_at_1", rep.per_k[1].classes == 2,
                           "degrees 2 vs 3 separate the pair after one round"));
  return out;
}

std::vector<CheckResult> verify_feature_swap_trees() {
  TreePair pair = feature_swap_trees();
  std::vector<CheckResult> out;

  Fingerprint fa = walk_fingerprint(rooted(pair.first.graph, pair.first.root),
                                    pair.first.features, 2);
  Fingerprint fb = walk_fingerprint(rooted(pair.second.graph, pair.second.root),
                                    pair.second.features, 2);
  out.push_back(make_check("fingerprints_match_to_2", fa == fb,
                           "walk fingerprints agree up to length 2"));

  BigInt ca = count_attributed(rooted(pair.first.graph, pair.first.root), pair.first.features,
                               {1, 1});
  BigInt cb = count_attributed(rooted(pair.second.graph, pair.second.root),
                               pair.second.features, {1, 1});
  out.push_back(make_check("attributed_counts_differ", ca != cb,
                           "walks hitting features (1,1) count " + ca.str() + " vs " +
                               cb.str()));

  GraphCollection c;
  c.add("first", pair.first.graph, pair.first.features);
  c.add("second", pair.second.graph, pair.second.features);
  CollectionRefinement ref = refine_collection(c, 2);
  bool roots_differ = ref.per_graph[0].colors[2][pair.first.root] !=
                      ref.per_graph[1].colors[2][pair.second.root];
  out.push_back(make_check("root_colors_differ_at_2", roots_differ,
                           "two refinement rounds separate the roots"));
  return out;
}

std::vector<CheckResult> verify_leaf_shift_family() {
  const int m = 3, k = 3;
  std::vector<FamilyMember> family = leaf_shift_family(m, k);
  std::vector<CheckResult> out;
  out.push_back(make_check("member_count", family.size() == 10,
                           std::to_string(family.size()) + " members for m=3, k=3"));

  std::vector<TreeGraph> graphs;
  for (auto& member : family) graphs.push_back(tree_to_graph(member.tree));

  bool fingerprints_equal = true;
  Fingerprint first = walk_fingerprint(rooted(graphs[0].graph, 0), graphs[0].features, k);
  for (size_t i = 1; i < graphs.size(); ++i) {
    Fingerprint fp = walk_fingerprint(rooted(graphs[i].graph, 0), graphs[i].features, k);
    if (!(fp == first)) fingerprints_equal = false;
  }
  out.push_back(make_check("fingerprints_match_to_3", fingerprints_equal,
                           "all members share walk fingerprints up to length 3"));

  std::vector<int> tuple(k, 1);
  std::set<BigInt> path_values;
  for (const auto& member : family) {
    path_values.insert(tree_path_attributed_count(member.tree, tuple));
  }
  bool sweep = path_values.size() == 10 && *path_values.begin() == 0 &&
               *path_values.rbegin() == 9;
  out.push_back(make_check("path_counts_sweep_range", sweep,
                           "descending-path counts for features (1,1,1) hit 0..9"));

  std::set<BigInt> walk_values;
  for (const auto& tg : graphs) {
    walk_values.insert(count_attributed(rooted(tg.graph, 0), tg.features, tuple));
  }
  out.push_back(make_check("walk_counts_all_distinct", walk_values.size() == 10,
                           "attributed walk counts are pairwise distinct"));

  GraphCollection c;
  for (size_t i = 0; i < graphs.size(); ++i) {
    c.add("member" + std::to_string(i), graphs[i].graph, graphs[i].features);
  }
  CollectionRefinement ref = refine_collection(c, k);
  std::set<int> root_colors;
  for (const auto& ca : ref.per_graph) root_colors.insert(ca.colors[k][0]);
  out.push_back(make_check("root_colors_all_distinct", root_colors.size() == 10,
                           "depth-3 refinement separates every pair of roots"));
  return out;
}

}  // namespace

std::vector<std::string> construction_names() {
  return {"walk_symmetric_pair", "hexagon_vs_triangles", "cycle_vs_cube", "feature_swap_trees",
          "leaf_shift_family"};
}

std::vector<CheckResult> verify_construction(const std::string& name) {
  if (name == "walk_symmetric_pair") return verify_walk_symmetric_pair();
  if (name == "hexagon_vs_triangles") return verify_hexagon_vs_triangles();
  if (name == "cycle_vs_cube") return verify_cycle_vs_cube();
  if (name == "feature_swap_trees") return verify_feature_swap_trees();
  if (name == "leaf_shift_family") return verify_leaf_shift_family();
  throw ValidationError("unknown construction: " + name);
}

}  // namespace egonet
