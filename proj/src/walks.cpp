#include "egonet/walks.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "egonet/errors.hpp"

namespace egonet {

std::vector<BigInt> walk_counts(const Graph& g, int k) {
  if (k < 0) throw ValidationError("walk length must be >= 0");
  std::vector<BigInt> v(g.num_nodes(), BigInt(1));
  for (int step = 0; step < k; ++step) {
    std::vector<BigInt> next(g.num_nodes(), BigInt(0));
    for (int u = 0; u < g.num_nodes(); ++u) {
      for (int w : g.neighbors(u)) next[u] += v[w];
    }
    v = std::move(next);
  }
  return v;
}

BigInt total_walks(const RootedGraph& rg, int k) { return walk_counts(*rg.graph, k)[rg.root]; }

BigInt count_attributed(const RootedGraph& rg, const NodeFeatures& f,
                        const std::vector<int>& tuple) {
  const Graph& g = *rg.graph;
  if (f.size() != g.num_nodes()) throw ValidationError("features size != graph size");
  if (tuple.empty()) throw ValidationError("tuple must be non-empty");
  std::vector<BigInt> v(g.num_nodes(), BigInt(0));
  v[rg.root] = 1;
  for (int x : tuple) {
    std::vector<BigInt> next(g.num_nodes(), BigInt(0));
    for (int u = 0; u < g.num_nodes(); ++u) {
      if (f.label(u) != x) continue;
      for (int w : g.neighbors(u)) next[u] += v[w];
    }
    v = std::move(next);
  }
  BigInt total = 0;
  for (const auto& c : v) total += c;
  return total;
}

std::string Fingerprint::canonical_bytes(int up_to) const {
  if (up_to <= 0 || up_to > max_length()) up_to = max_length();
  std::ostringstream os;
  for (int k = 1; k <= up_to; ++k) {
    os << k << ":";
    for (const auto& [key, count] : per_length[k]) {
      os << "[";
      for (size_t i = 0; i < key.mid_degrees.size(); ++i) {
        if (i) os << ",";
        os << key.mid_degrees[i];
      }
      os << "|" << key.end_degree << "|" << key.end_feature << "]=" << count.str() << ";";
    }
    os << "\n";
  }
  return os.str();
}

Fingerprint walk_fingerprint(const RootedGraph& rg, const NodeFeatures& f, int max_length,
                             size_t multiset_cap) {
  const Graph& g = *rg.graph;
  if (f.size() != g.num_nodes()) throw ValidationError("features size != graph size");
  if (max_length < 1) throw ValidationError("fingerprint length must be >= 1");

  Fingerprint fp;
  fp.per_length.resize(max_length + 1);

  // State: walk currently at `node`, having stepped through nodes whose sorted
  // degrees form `mids` (the final node's degree is not in `mids` yet).
  std::map<std::pair<std::vector<int>, int>, BigInt> states;
  for (int u : g.neighbors(rg.root)) {
    states[{std::vector<int>{}, u}] += 1;
  }

  for (int t = 1; t <= max_length; ++t) {
    std::set<std::vector<int>> distinct;
    for (const auto& [state, count] : states) {
      const auto& [mids, u] = state;
      distinct.insert(mids);
      FingerprintKey key{mids, g.degree(u), f.label(u)};
      fp.per_length[t][key] += count;
    }
    if (distinct.size() > multiset_cap) {
      std::ostringstream os;
      os << "walk fingerprint at length " << t << ": " << distinct.size()
         << " distinct degree multisets exceed the cap of " << multiset_cap
         << " (worst case grows like C(k+m-2, m-1) in the length k and distinct degree count m)";
      throw BudgetError(os.str());
    }
    if (t == max_length) break;
    std::map<std::pair<std::vector<int>, int>, BigInt> next;
    for (const auto& [state, count] : states) {
      const auto& [mids, u] = state;
      std::vector<int> grown = mids;
      grown.insert(std::upper_bound(grown.begin(), grown.end(), g.degree(u)), g.degree(u));
      for (int v : g.neighbors(u)) {
        next[{grown, v}] += count;
      }
    }
    states = std::move(next);
  }
  return fp;
}

namespace {

void check_walk_budget(const Graph& g, int length, double budget) {
  double est = 1.0;
  for (int i = 0; i < length; ++i) {
    est *= std::max(1, g.max_degree());
    if (est > budget) {
      throw BudgetError("walk enumeration: max_degree^" + std::to_string(length) +
                        " exceeds budget " + std::to_string(static_cast<long long>(budget)));
    }
  }
}

}  // namespace

void enumerate_walks(const RootedGraph& rg, int length,
                     const std::function<void(const std::vector<int>&)>& visit, double budget) {
  const Graph& g = *rg.graph;
  if (length < 0) throw ValidationError("walk length must be >= 0");
  check_walk_budget(g, length, budget);
  std::vector<int> walk;
  walk.reserve(length);
  auto rec = [&](auto&& self, int u, int remaining) -> void {
    if (remaining == 0) {
      visit(walk);
      return;
    }
    for (int v : g.neighbors(u)) {
      walk.push_back(v);
      self(self, v, remaining - 1);
      walk.pop_back();
    }
  };
  rec(rec, rg.root, length);
}

BigInt brute_force_walks(const RootedGraph& rg, const NodeFeatures& f, const WalkQuery& q,
                         double budget) {
  if (f.size() != rg.graph->num_nodes()) throw ValidationError("features size != graph size");
  if (q.tuple && static_cast<int>(q.tuple->size()) != q.length) {
    throw ValidationError("walk query: tuple length != walk length");
  }
  BigInt count = 0;
  enumerate_walks(
      rg, q.length,
      [&](const std::vector<int>& walk) {
        if (q.tuple) {
          for (int i = 0; i < q.length; ++i) {
            if (f.label(walk[i]) != (*q.tuple)[i]) return;
          }
        }
        count += 1;
      },
      budget);
  return count;
}

}  // namespace egonet
