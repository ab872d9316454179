#pragma once

#include <Eigen/Dense>

#include <map>
#include <string>
#include <vector>

#include "egonet/graph.hpp"
#include "egonet/numeric.hpp"
#include "egonet/operators.hpp"
#include "egonet/report.hpp"

namespace egonet {

// Column blocks [op_1(A) X, ..., op_m(A) X] where X one-hot encodes the
// feature alphabet.
template <typename T>
FeatureMatrix<T> augment(const Graph& g, const NodeFeatures& f, const OperatorFamily& fam);

// How nodes are keyed when counting augmented-feature equivalence classes.
//  ExactFeatures      exact augmented-feature rows (float rows rounded to 12
//                     significant digits)
//  WalkFingerprint    root feature + root degree + walk types up to the family
//                     max power; exact, and refines the float features of any
//                     degree-normalized family
//  DegreePairMultiset (degree, sorted neighbor degrees)
enum class KeyMode { ExactFeatures, WalkFingerprint, DegreePairMultiset };

EquivalenceReport gamlp_node_classes(const GraphCollection& c, const OperatorFamily& fam,
                                     KeyMode mode, Tower tower, bool with_sizes = false);
// Graph key: sorted multiset of node keys.
EquivalenceReport gamlp_graph_classes(const GraphCollection& c, const OperatorFamily& fam,
                                      KeyMode mode, Tower tower, bool with_sizes = false);

// Degree-profile identifier: with r = floor(3 log2 n) (clamped to [1, n]) and
// dbar the r-th largest degree, each node contributes the multiset of its
// neighbors' degrees exceeding dbar; the identifier is the multiset of those
// multisets, serialized canonically.
std::string babai_identifier(const Graph& g);

// Multiset over nodes of (degree, sorted neighbor degrees), serialized
// canonically. Refines babai_identifier.
std::string degree_pair_fingerprint(const Graph& g);

// Exponents above this make u -> u^-alpha sums injective on degree multisets
// drawn from [1, n]: log n / (log n - log(n-1)).
double alpha_threshold(int n);

// Exact value of sum_{u in S} u^-alpha in the float tower (diagnostic only;
// underflows for alpha near the threshold, which is why equivalence keys use
// the sorted-multiset form instead).
double degree_power_sum(const std::vector<int>& degrees, double alpha);

// --- exact features for half-integer normalization exponents ---------------

// A value of the form sum_s coeff_s * sqrt(s) with s squarefree; equality of
// maps is equality of values (sqrt of distinct squarefree integers are
// linearly independent over Q).
using SurdValue = std::map<BigInt, BigRat>;

std::string surd_to_string(const SurdValue& v);

// Exact rows of [(D^-a A D^-b)^k X] for k = 1..K, a and b with denominator 1
// or 2, evaluated through walk fingerprints. Layout: result[node] holds
// (k-1) * |alphabet| + column entries.
std::vector<std::vector<SurdValue>> exact_normalized_features(const Graph& g,
                                                              const NodeFeatures& f,
                                                              const BigRat& alpha,
                                                              const BigRat& beta, int K);

// --- readouts ---------------------------------------------------------------

struct RidgeModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
  double train_nmse = 0.0;  // MSE / label variance on the training rows
};

// Normal equations with an unregularized bias column. lambda = 0 demands a
// non-singular system.
RidgeModel fit_ridge(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda);

double normalized_mse(const Eigen::VectorXd& pred, const Eigen::VectorXd& y);

struct LogisticConfig {
  double lr = 0.1;
  int epochs = 500;
  double l2 = 1e-4;
};

struct LogisticModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
  double train_accuracy = 0.0;

  // Signs of the decision values, zeros mapped to +1.
  std::vector<int> predict(const Eigen::MatrixXd& x) const;
};

// Full-batch gradient descent on L2-regularized logistic loss, zero init;
// labels are +-1.
LogisticModel fit_logistic(const Eigen::MatrixXd& x, const std::vector<int>& y,
                           const LogisticConfig& cfg);

}  // namespace egonet
