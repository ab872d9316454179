#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "egonet/graph.hpp"
#include "egonet/numeric.hpp"

namespace egonet {

// (A^k 1)_u for every node: number of length-k walks started anywhere at u.
std::vector<BigInt> walk_counts(const Graph& g, int k);

BigInt total_walks(const RootedGraph& rg, int k);

// Number of walks (i_1, ..., i_k) from the root whose feature sequence equals
// `tuple` (the root's own feature is not part of the tuple). Computed by the
// masked-aggregation DP, exact.
BigInt count_attributed(const RootedGraph& rg, const NodeFeatures& f,
                        const std::vector<int>& tuple);

// Walk type: multiset of intermediate degrees, then degree and feature of the
// final node. Two nodes with equal per-type counts get equal features under
// any degree-normalized operator family, whatever the normalization exponents.
struct FingerprintKey {
  std::vector<int> mid_degrees;  // sorted
  int end_degree = 0;
  int end_feature = 0;
  auto operator<=>(const FingerprintKey&) const = default;
};

struct Fingerprint {
  // per_length[k] maps walk type -> exact count, k = 1..max length.
  std::vector<std::map<FingerprintKey, BigInt>> per_length;

  int max_length() const { return static_cast<int>(per_length.size()) - 1; }
  // Deterministic serialization of lengths 1..up_to (0 = all).
  std::string canonical_bytes(int up_to = 0) const;
  bool operator==(const Fingerprint&) const = default;
};

// DP over (current node, sorted multiset of degrees seen at steps 1..t-1).
// Throws BudgetError once the number of distinct degree multisets passes
// multiset_cap.
Fingerprint walk_fingerprint(const RootedGraph& rg, const NodeFeatures& f, int max_length,
                             size_t multiset_cap = 1000000);

struct WalkQuery {
  int length = 1;
  std::optional<std::vector<int>> tuple;  // feature sequence filter
};

// Explicit recursive enumeration; the oracle the DPs are tested against.
// Refuses when max_degree^length exceeds `budget`.
BigInt brute_force_walks(const RootedGraph& rg, const NodeFeatures& f, const WalkQuery& q,
                         double budget = 1e7);

// Visits every length-k walk from the root as a node sequence (i_1..i_k).
// Same budget rule as brute_force_walks.
void enumerate_walks(const RootedGraph& rg, int length,
                     const std::function<void(const std::vector<int>&)>& visit,
                     double budget = 1e7);

}  // namespace egonet
