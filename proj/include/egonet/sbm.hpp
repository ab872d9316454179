#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "egonet/gamlp.hpp"
#include "egonet/graph.hpp"
#include "egonet/operators.hpp"

namespace egonet {

struct SbmParams {
  int n = 0;
  double a = 0.0;  // within-block: p_in = a/n
  double b = 0.0;  // across blocks: p_out = b/n
  uint64_t seed = 1;
};

struct SbmInstance {
  Graph graph;
  std::vector<int> truth;  // +-1 block label per node
  SbmParams params;
};

SbmInstance generate_sbm(const SbmParams& p);

// (a-b)^2 / (2(a+b)); 1 is the detectability threshold.
double sbm_snr(double a, double b);

// Two-block presets with a+b = 6, ordered easiest to hardest.
struct SbmPreset {
  std::string name;
  double a = 0.0;
  double b = 0.0;
};
const std::vector<SbmPreset>& sbm_presets();

// 2 * max(agreement, 1-agreement) - 1 against +-1 truth.
double overlap(const std::vector<int>& pred, const std::vector<int>& truth);

struct ClusterResult {
  std::vector<int> assignment;  // +-1
  double overlap = 0.0;
  double r = 0.0;  // deformation parameter actually used
};

// Signs of the second leading eigenvector of kappa I - H(r), scored against
// the instance truth. r defaults to sqrt(mean degree).
ClusterResult bethe_hessian_cluster(const SbmInstance& inst, double kappa = 8.0,
                                    std::optional<double> r = std::nullopt,
                                    uint64_t eig_seed = 12345);

struct CommunityFitResult {
  double train_overlap = 0.0;
  double test_overlap = 0.0;
  long long train_size = 0;
  long long test_size = 0;
};

// Augments all-ones node features with `fam` in the float tower, optionally
// standardizes each column, fits a logistic readout on a seeded node split,
// and scores overlap on the held-out nodes.
CommunityFitResult gamlp_community(const SbmInstance& inst, const OperatorFamily& fam,
                                   const LogisticConfig& cfg = {}, double train_frac = 0.5,
                                   bool normalize = true, uint64_t split_seed = 7);

// Random d-regular simple graph via stub pairing with double-edge-swap repair.
Graph random_regular_graph(int n, int d, uint64_t seed);

struct SweepPoint {
  std::string preset;
  double snr = 0.0;
  double mean_overlap = 0.0;
  std::vector<double> per_seed;
};

// Spectral clustering overlap across `seeds` independent instances of one
// preset; `threads` > 1 distributes seeds over worker threads with a
// deterministic merge.
SweepPoint spectral_sweep_point(const SbmPreset& preset, int n, int seeds, int threads = 1,
                                uint64_t seed_base = 1000);

}  // namespace egonet
