#pragma once

#include <optional>
#include <string>
#include <vector>

#include "egonet/graph.hpp"
#include "egonet/numeric.hpp"

namespace egonet {

// ---------------------------------------------------------------------------
// Small named graphs used by the reference constructions and tests.
// ---------------------------------------------------------------------------

Graph cycle_graph(int n);
Graph complete_graph(int n);
Graph hypercube_graph(int dim);
Graph disjoint_union(const Graph& a, const Graph& b);

// ---------------------------------------------------------------------------
// Featured rooted trees.
// ---------------------------------------------------------------------------

struct FeaturedTree {
  int feature = 0;
  std::vector<FeaturedTree> children;

  // Sorts the whole subtree into canonical child order and returns the
  // canonical serialization "(f c1 c2 ...)". Equal strings <=> isomorphic
  // featured rooted trees.
  std::string canonical();
  std::string serialize() const;  // current child order, no sorting
  int depth() const;
  int size() const;
};

struct TreeGraph {
  Graph graph;
  NodeFeatures features;
  int root = 0;
};

// Breadth-first node numbering with the root at index 0.
TreeGraph tree_to_graph(const FeaturedTree& t);

// Number of nodes at depth exactly k.
BigInt tree_depth_count(const FeaturedTree& t, int k);

// Number of root-to-depth-k descending paths whose nodes at steps 1..k carry
// the features in `tuple` (the root's own feature is not constrained).
BigInt tree_path_attributed_count(const FeaturedTree& t, const std::vector<int>& tuple);

// ---------------------------------------------------------------------------
// Exhaustive tree enumeration.
// ---------------------------------------------------------------------------

struct EnumerationResult {
  long long count = 0;
  BigInt lower_bound = 0;   // (m-1)^(2^K - 1)
  bool bound_satisfied = false;
  std::vector<FeaturedTree> trees;  // canonical representatives
};

// All depth-K neighborhood aggregation trees of m-regular binary-featured
// graphs, up to rooted featured isomorphism: the root has m children, every
// other internal node has m-1 children, all leaves sit at depth K, and every
// node carries a feature in {0,1}. Throws BudgetError if the census would
// exceed `budget` trees.
EnumerationResult enumerate_agg_trees(int m, int K, long long budget = 10000000);

struct TreeSpec {
  int m = 2;
  int K = 1;
  // When set, level_zero_counts[d] prescribes how many nodes at depth d carry
  // feature 0 (size must be K+1).
  std::optional<std::vector<int>> level_zero_counts;
};

// All full m-ary trees of depth K (every internal node, root included, has
// exactly m children) with binary features, up to rooted featured
// isomorphism, optionally restricted to prescribed per-level zero counts.
EnumerationResult enumerate_full_mary(const TreeSpec& spec, long long budget = 10000000);

// ---------------------------------------------------------------------------
// Parameterized family: full m-ary depth-k trees that share every walk
// fingerprint up to length k yet give k-step attributed walk counts that
// sweep an entire integer range.
// ---------------------------------------------------------------------------

struct FamilyMember {
  FeaturedTree tree;
  long long ones_under_first_branch = 0;  // the swept parameter c
};

// Members c = 0..m^(k-1): root feature 0; at depths 1..k-1 the first branch
// carries feature 1 and the others 0; c leaf ones sit under the first branch
// and m^(k-1) - c under the rest (first slots in depth-first order).
std::vector<FamilyMember> leaf_shift_family(int m, int k);

// ---------------------------------------------------------------------------
// Reference pairs and their verification.
// ---------------------------------------------------------------------------

// 14-node pair with equal total walk counts of every length but different
// degree sequences seen from two refinement rounds.
GraphCollection walk_symmetric_pair();

// Hexagon vs two disjoint triangles: indistinguishable by color refinement,
// split by the distance-2 indicator but not by binarized two-step reach.
GraphCollection hexagon_vs_triangles();

// 8-cycle vs 3-cube: regular graphs of different degree whose symmetrically
// normalized walk features are exactly 1 everywhere.
GraphCollection cycle_vs_cube();

// Two 7-node full binary trees differing by a leaf-feature swap: equal walk
// fingerprints up to length 2, different attributed walk counts.
struct TreePair {
  TreeGraph first;
  TreeGraph second;
};
TreePair feature_swap_trees();

struct CheckResult {
  std::string check;
  bool pass = false;
  std::string detail;
};

std::vector<std::string> construction_names();

// Runs the defining checks of the named construction ("leaf_shift_family"
// verifies the m=3, k=3 instance). Throws ValidationError on unknown names.
std::vector<CheckResult> verify_construction(const std::string& name);

}  // namespace egonet
