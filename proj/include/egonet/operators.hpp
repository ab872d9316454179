#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "egonet/graph.hpp"
#include "egonet/numeric.hpp"

namespace egonet {

// One graph operator. Text forms (canonical on the left):
//   I                    identity
//   D                    degree diagonal
//   A^k                  k-th adjacency power
//   N(a,b)^k             (D^-a A D^-b)^k, a and b rational
//   SL(e)^k              self-loop normalized: (Dbar^-1/2 (A+eI) Dbar^-1/2)^k,
//                        Dbar = D + eI
//   minpow(k)            min(A^k, 1) entrywise, diagonal kept as produced
//   dist(k)              indicator of graph distance exactly k (root excluded)
//   nds(a)               A D^-a  (row i sums d_j^-a over neighbors)
//   BH(kappa,r)^k        (kappa*I - H(r))^k with H(r) = (r^2-1)I - rA + D;
//                        r = "auto" resolves to sqrt(mean degree)
struct OperatorSpec {
  enum class Kind {
    Identity,
    Degree,
    AdjacencyPower,
    NormalizedAdjacencyPower,
    SelfLoopNormalizedPower,
    WalkBinarized,
    DistanceExact,
    NeighborDegreeSum,
    BetheHessianShifted,
  };

  Kind kind = Kind::Identity;
  int power = 1;
  BigRat alpha, beta;           // NormalizedAdjacencyPower / NeighborDegreeSum
  BigRat epsilon;               // SelfLoopNormalizedPower
  BigRat kappa = 8;             // BetheHessianShifted
  std::optional<BigRat> r;      // BetheHessianShifted; nullopt = auto

  static OperatorSpec parse(const std::string& text);
  std::string to_string() const;

  // Neighborhood radius the operator draws on; orders per-k class reports.
  int hop() const;

  bool integer_entries() const;
  bool rational_entries() const;

  bool operator==(const OperatorSpec&) const = default;
};

struct OperatorFamily {
  std::vector<OperatorSpec> ops;

  // Comma-separated operator list; "X^a..b" (or "X^a..X^b") expands a power
  // range.
  static OperatorFamily parse(const std::string& text);
  std::string to_string() const;

  int max_hop() const;
  // Strictest tower every member admits.
  Tower auto_tower() const;
  // Throws unless every member is computable in tower t.
  void require_tower(Tower t) const;

  bool operator==(const OperatorFamily&) const = default;
};

// Applies one operator to a dense column block. T must match the tower the
// operator admits (checked at runtime).
template <typename T>
Matrix<T> apply_operator(const OperatorSpec& spec, const Graph& g, const Matrix<T>& x);

// Symmetric sparse matrix for the spectral pieces.
class SparseSymmetric {
 public:
  SparseSymmetric() = default;
  explicit SparseSymmetric(int n) : n_(n), rows_(n) {}

  // Entries are accumulated; (i, j) with i != j is mirrored to (j, i).
  static SparseSymmetric from_triplets(int n,
                                       const std::vector<std::tuple<int, int, double>>& entries);

  int size() const { return n_; }
  std::vector<double> matvec(const std::vector<double>& x) const;
  double diagonal(int i) const;
  // Gershgorin lower bound on the spectrum: min_i (a_ii - sum_{j != i} |a_ij|).
  double gershgorin_lower_bound() const;

 private:
  int n_ = 0;
  std::vector<std::vector<std::pair<int, double>>> rows_;
};

// H(r) = (r^2 - 1) I - r A + D.
SparseSymmetric bethe_hessian(const Graph& g, double r);
// kappa I - H(r).
SparseSymmetric bethe_hessian_shifted(const Graph& g, double kappa, double r);

struct EigenResult {
  std::vector<double> values;                   // descending
  std::vector<std::vector<double>> vectors;     // unit norm, values order
  int iterations = 0;
  double residual = 0.0;                        // max over returned pairs
};

// Power iteration with deflation for the algebraically largest eigenpairs.
// A Gershgorin shift keeps the top of the spectrum dominant in magnitude, so
// "leading" means largest eigenvalue, not largest |eigenvalue|. Convergence:
// successive Rayleigh quotients differ by < tol and the relative residual is
// below resid_tol. max_iter = 0 means 10n per eigenpair.
EigenResult leading_eigenvectors(const SparseSymmetric& m, int count, double tol = 1e-10,
                                 int max_iter = 0, uint64_t seed = 12345,
                                 double resid_tol = 1e-6);

}  // namespace egonet
