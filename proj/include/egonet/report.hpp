#pragma once

#include <optional>
#include <string>
#include <vector>

namespace egonet {

struct PerKCount {
  int k = 0;
  long long classes = 0;
  bool operator==(const PerKCount&) const = default;
};

// Equivalence-class counts per depth/power, for one method over one
// collection. Serialization is deterministic: reruns produce identical bytes.
struct EquivalenceReport {
  std::string scope;   // "node" | "graph"
  std::string method;  // "GNN" | "GAMLP"
  std::string omega;   // operator family text, GAMLP only
  std::vector<PerKCount> per_k;
  // Class sizes at the largest k, descending; filled on request.
  std::optional<std::vector<long long>> sizes;

  std::string to_json() const;  // pretty-printed, stable field order
  std::string to_csv() const;   // "k,classes" rows
};

// Writes report JSON to `json_path` and a CSV twin next to it (extension
// swapped to .csv).
void write_report(const EquivalenceReport& rep, const std::string& json_path);

}  // namespace egonet
