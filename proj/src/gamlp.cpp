#include "egonet/gamlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "egonet/errors.hpp"
#include "egonet/walks.hpp"

namespace egonet {

template <typename T>
FeatureMatrix<T> augment(const Graph& g, const NodeFeatures& f, const OperatorFamily& fam) {
  if (f.size() != g.num_nodes()) throw ValidationError("features size != graph size");
  if (fam.ops.empty()) throw ValidationError("empty operator family");
  int a = static_cast<int>(f.alphabet().size());
  Matrix<T> x(g.num_nodes(), a);
  for (int i = 0; i < g.num_nodes(); ++i) x(i, f.alphabet_index(i)) = T(1);

  FeatureMatrix<T> out;
  out.values = Matrix<T>(g.num_nodes(), static_cast<int>(fam.ops.size()) * a);
  int col = 0;
  for (size_t oi = 0; oi < fam.ops.size(); ++oi) {
    Matrix<T> block = apply_operator(fam.ops[oi], g, x);
    for (int c = 0; c < a; ++c, ++col) {
      for (int i = 0; i < g.num_nodes(); ++i) out.values(i, col) = block(i, c);
      out.provenance.push_back({static_cast<int>(oi), c});
    }
  }
  return out;
}

template FeatureMatrix<BigInt> augment<BigInt>(const Graph&, const NodeFeatures&,
                                               const OperatorFamily&);
template FeatureMatrix<BigRat> augment<BigRat>(const Graph&, const NodeFeatures&,
                                               const OperatorFamily&);
template FeatureMatrix<double> augment<double>(const Graph&, const NodeFeatures&,
                                               const OperatorFamily&);

namespace {

// chunks[node][k] is the key material arriving at power k; classes at k key on
// the chunk sequence 0..k, maintained incrementally.
struct ChainedClasses {
  std::vector<std::vector<int>> node_class_per_k;  // [k][flat node]
  std::vector<long long> classes_per_k;
};

ChainedClasses chain_classes(const std::vector<std::vector<std::string>>& chunks, int levels) {
  ChainedClasses out;
  size_t n = chunks.size();
  std::vector<int> prev(n, 0);
  for (int k = 0; k < levels; ++k) {
    std::unordered_map<std::string, int> interner;
    std::vector<int> cur(n);
    for (size_t i = 0; i < n; ++i) {
      std::string key = std::to_string(prev[i]) + "|" + chunks[i][k];
      auto [it, ins] = interner.try_emplace(std::move(key), static_cast<int>(interner.size()));
      cur[i] = it->second;
    }
    out.classes_per_k.push_back(static_cast<long long>(interner.size()));
    out.node_class_per_k.push_back(cur);
    prev = std::move(cur);
  }
  return out;
}

template <typename T>
std::vector<std::vector<std::string>> exact_chunks(const GraphCollection& c,
                                                   const OperatorFamily& fam) {
  int max_hop = fam.max_hop();
  std::vector<std::vector<std::string>> chunks;
  for (const auto& entry : c.entries()) {
    FeatureMatrix<T> fm = augment<T>(entry.graph, entry.features, fam);
    for (int i = 0; i < entry.graph.num_nodes(); ++i) {
      std::vector<std::string> per_k(max_hop + 1);
      for (int col = 0; col < fm.values.cols(); ++col) {
        int hop = fam.ops[fm.provenance[col].operator_index].hop();
        per_k[hop] += key_digits(fm.values(i, col));
        per_k[hop] += ",";
      }
      chunks.push_back(std::move(per_k));
    }
  }
  return chunks;
}

std::string fingerprint_level_chunk(const Fingerprint& fp, int k) {
  std::ostringstream os;
  for (const auto& [key, count] : fp.per_length[k]) {
    os << "[";
    for (size_t i = 0; i < key.mid_degrees.size(); ++i) {
      if (i) os << ",";
      os << key.mid_degrees[i];
    }
    os << "|" << key.end_degree << "|" << key.end_feature << "]=" << count.str() << ";";
  }
  return os.str();
}

std::vector<std::vector<std::string>> fingerprint_chunks(const GraphCollection& c, int max_hop) {
  std::vector<std::vector<std::string>> chunks;
  for (const auto& entry : c.entries()) {
    for (int i = 0; i < entry.graph.num_nodes(); ++i) {
      std::vector<std::string> per_k(max_hop + 1);
      per_k[0] = std::to_string(entry.features.label(i));
      if (max_hop >= 1) {
        Fingerprint fp = walk_fingerprint(rooted(entry.graph, i), entry.features, max_hop);
        for (int k = 1; k <= max_hop; ++k) {
          per_k[k] = fingerprint_level_chunk(fp, k);
        }
        per_k[1] = "deg=" + std::to_string(entry.graph.degree(i)) + ";" + per_k[1];
      }
      chunks.push_back(std::move(per_k));
    }
  }
  return chunks;
}

std::string degree_pair_key(const Graph& g, int i) {
  std::ostringstream os;
  os << g.degree(i) << ":";
  std::vector<int> nd;
  for (int j : g.neighbors(i)) nd.push_back(g.degree(j));
  std::sort(nd.begin(), nd.end());
  for (size_t t = 0; t < nd.size(); ++t) {
    if (t) os << ",";
    os << nd[t];
  }
  return os.str();
}

std::vector<std::vector<std::string>> degree_pair_chunks(const GraphCollection& c) {
  std::vector<std::vector<std::string>> chunks;
  for (const auto& entry : c.entries()) {
    for (int i = 0; i < entry.graph.num_nodes(); ++i) {
      chunks.push_back({degree_pair_key(entry.graph, i)});
    }
  }
  return chunks;
}

struct ModePlan {
  std::vector<std::vector<std::string>> chunks;
  std::vector<int> ks;  // k value reported for each chunk level
};

ModePlan plan_for_mode(const GraphCollection& c, const OperatorFamily& fam, KeyMode mode,
                       Tower tower) {
  ModePlan plan;
  switch (mode) {
    case KeyMode::ExactFeatures: {
      fam.require_tower(tower);
      switch (tower) {
        case Tower::ExactInteger:
          plan.chunks = exact_chunks<BigInt>(c, fam);
          break;
        case Tower::ExactRational:
          plan.chunks = exact_chunks<BigRat>(c, fam);
          break;
        case Tower::Float:
          plan.chunks = exact_chunks<double>(c, fam);
          break;
      }
      for (int k = 0; k <= fam.max_hop(); ++k) plan.ks.push_back(k);
      return plan;
    }
    case KeyMode::WalkFingerprint: {
      plan.chunks = fingerprint_chunks(c, fam.max_hop());
      for (int k = 0; k <= fam.max_hop(); ++k) plan.ks.push_back(k);
      return plan;
    }
    case KeyMode::DegreePairMultiset: {
      plan.chunks = degree_pair_chunks(c);
      plan.ks.push_back(1);
      return plan;
    }
  }
  throw ValidationError("unknown key mode");
}

std::optional<std::vector<long long>> sizes_of(const std::vector<int>& keys, bool wanted) {
  if (!wanted) return std::nullopt;
  std::unordered_map<int, long long> counts;
  for (int k : keys) ++counts[k];
  std::vector<long long> sizes;
  for (auto [k, n] : counts) sizes.push_back(n);
  std::sort(sizes.rbegin(), sizes.rend());
  return sizes;
}

}  // namespace

EquivalenceReport gamlp_node_classes(const GraphCollection& c, const OperatorFamily& fam,
                                     KeyMode mode, Tower tower, bool with_sizes) {
  ModePlan plan = plan_for_mode(c, fam, mode, tower);
  ChainedClasses chained = chain_classes(plan.chunks, static_cast<int>(plan.ks.size()));
  EquivalenceReport rep;
  rep.scope = "node";
  rep.method = "GAMLP";
  rep.omega = fam.to_string();
  for (size_t lvl = 0; lvl < plan.ks.size(); ++lvl) {
    rep.per_k.push_back({plan.ks[lvl], chained.classes_per_k[lvl]});
  }
  rep.sizes = sizes_of(chained.node_class_per_k.back(), with_sizes);
  return rep;
}

EquivalenceReport gamlp_graph_classes(const GraphCollection& c, const OperatorFamily& fam,
                                      KeyMode mode, Tower tower, bool with_sizes) {
  ModePlan plan = plan_for_mode(c, fam, mode, tower);
  ChainedClasses chained = chain_classes(plan.chunks, static_cast<int>(plan.ks.size()));
  EquivalenceReport rep;
  rep.scope = "graph";
  rep.method = "GAMLP";
  rep.omega = fam.to_string();
  std::vector<int> graph_keys_last;
  for (size_t lvl = 0; lvl < plan.ks.size(); ++lvl) {
    std::unordered_map<std::string, int> interner;
    std::vector<int> graph_keys;
    size_t flat = 0;
    for (const auto& entry : c.entries()) {
      std::vector<int> ids;
      for (int i = 0; i < entry.graph.num_nodes(); ++i) {
        ids.push_back(chained.node_class_per_k[lvl][flat++]);
      }
      std::sort(ids.begin(), ids.end());
      std::string key;
      for (int id : ids) key += std::to_string(id) + ",";
      auto [it, ins] = interner.try_emplace(std::move(key), static_cast<int>(interner.size()));
      graph_keys.push_back(it->second);
    }
    rep.per_k.push_back({plan.ks[lvl], static_cast<long long>(interner.size())});
    if (lvl + 1 == plan.ks.size()) graph_keys_last = std::move(graph_keys);
  }
  rep.sizes = sizes_of(graph_keys_last, with_sizes);
  return rep;
}

std::string babai_identifier(const Graph& g) {
  int n = g.num_nodes();
  if (n == 0) return "";
  int r = 1;
  if (n > 1) r = static_cast<int>(std::floor(3.0 * std::log2(static_cast<double>(n))));
  r = std::clamp(r, 1, n);
  std::vector<int> degs(n);
  for (int i = 0; i < n; ++i) degs[i] = g.degree(i);
  std::vector<int> sorted = degs;
  std::sort(sorted.rbegin(), sorted.rend());
  int dbar = sorted[r - 1];

  std::vector<std::vector<int>> gammas(n);
  for (int i = 0; i < n; ++i) {
    for (int j : g.neighbors(i)) {
      if (degs[j] > dbar) gammas[i].push_back(degs[j]);
    }
    std::sort(gammas[i].begin(), gammas[i].end());
  }
  std::sort(gammas.begin(), gammas.end());
  std::ostringstream os;
  for (const auto& gm : gammas) {
    os << "(";
    for (size_t t = 0; t < gm.size(); ++t) {
      if (t) os << ",";
      os << gm[t];
    }
    os << ")";
  }
  return os.str();
}

std::string degree_pair_fingerprint(const Graph& g) {
  std::vector<std::string> keys;
  for (int i = 0; i < g.num_nodes(); ++i) keys.push_back(degree_pair_key(g, i));
  std::sort(keys.begin(), keys.end());
  std::string out;
  for (const auto& k : keys) out += k + ";";
  return out;
}

double alpha_threshold(int n) {
  if (n < 2) throw ValidationError("alpha_threshold needs n >= 2");
  double ln = std::log(static_cast<double>(n));
  double lnm1 = std::log(static_cast<double>(n - 1));
  return ln / (ln - lnm1);
}

double degree_power_sum(const std::vector<int>& degrees, double alpha) {
  double s = 0.0;
  for (int d : degrees) {
    if (d <= 0) throw ValidationError("degree_power_sum needs positive degrees");
    s += std::pow(static_cast<double>(d), -alpha);
  }
  return s;
}

namespace {

// v = s * t^2 with s squarefree (trial division; leftover tested as a square).
void square_decompose(BigInt v, BigInt& s, BigInt& t) {
  s = 1;
  t = 1;
  for (long long p = 2; static_cast<BigInt>(p) * p <= v && p < 1000000; ++p) {
    if (v % p != 0) continue;
    int e = 0;
    while (v % p == 0) {
      v /= p;
      ++e;
    }
    if (e & 1) s *= p;
    for (int i = 0; i < e / 2; ++i) t *= p;
  }
  if (v > 1) {
    BigInt rt = boost::multiprecision::sqrt(v);
    if (rt * rt == v) {
      t *= rt;
    } else {
      s *= v;
    }
  }
}

bool half_integer(const BigRat& v) {
  auto den = boost::multiprecision::denominator(v);
  return den == 1 || den == 2;
}

long long doubled(const BigRat& v) {
  BigRat d = v * 2;
  return static_cast<long long>(boost::multiprecision::numerator(d));
}

}  // namespace

std::string surd_to_string(const SurdValue& v) {
  if (v.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [s, c] : v) {
    if (!first) os << " + ";
    first = false;
    os << key_digits(c) << "*sqrt(" << s.str() << ")";
  }
  return os.str();
}

std::vector<std::vector<SurdValue>> exact_normalized_features(const Graph& g,
                                                              const NodeFeatures& f,
                                                              const BigRat& alpha,
                                                              const BigRat& beta, int K) {
  if (!half_integer(alpha) || !half_integer(beta)) {
    throw ValidationError("exact normalized features need half-integer exponents");
  }
  if (K < 1) throw ValidationError("K must be >= 1");
  // Work with doubled exponents so everything stays integral under the root:
  // each walk contributes sqrt(d_root^-2a * (prod mids)^-2(a+b) * d_end^-2b).
  long long e_root = -doubled(alpha);
  long long e_mid = -doubled(alpha + beta);
  long long e_end = -doubled(beta);
  int a_size = static_cast<int>(f.alphabet().size());
  const auto& alphabet = f.alphabet();

  std::vector<std::vector<SurdValue>> out(g.num_nodes());
  for (int i = 0; i < g.num_nodes(); ++i) {
    out[i].assign(static_cast<size_t>(K) * a_size, SurdValue{});
    Fingerprint fp = walk_fingerprint(rooted(g, i), f, K);
    for (int k = 1; k <= K; ++k) {
      for (const auto& [key, count] : fp.per_length[k]) {
        BigRat r2 = rational_pow(BigRat(g.degree(i)), e_root) *
                    rational_pow(BigRat(key.end_degree), e_end);
        for (int d : key.mid_degrees) r2 *= rational_pow(BigRat(d), e_mid);
        // value = count * sqrt(r2); sqrt(n/d) = sqrt(n*d)/d = t*sqrt(s)/d
        BigInt num = boost::multiprecision::numerator(r2);
        BigInt den = boost::multiprecision::denominator(r2);
        BigInt s, t;
        square_decompose(num * den, s, t);
        BigRat coeff = BigRat(count) * BigRat(t, den);
        auto it = std::lower_bound(alphabet.begin(), alphabet.end(), key.end_feature);
        int col = (k - 1) * a_size + static_cast<int>(it - alphabet.begin());
        SurdValue& cell = out[i][col];
        cell[s] += coeff;
        if (cell[s] == 0) cell.erase(s);
      }
    }
  }
  return out;
}

RidgeModel fit_ridge(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda) {
  if (lambda < 0) throw ValidationError("ridge: lambda must be >= 0");
  if (x.rows() != y.size()) throw ValidationError("ridge: row count mismatch");
  if (x.rows() == 0) throw ValidationError("ridge: empty training set");
  long n = x.rows(), p = x.cols();
  Eigen::MatrixXd phi(n, p + 1);
  phi.leftCols(p) = x;
  phi.col(p).setOnes();
  Eigen::MatrixXd a = phi.transpose() * phi;
  for (long i = 0; i < p; ++i) a(i, i) += lambda;  // bias stays unregularized
  Eigen::VectorXd b = phi.transpose() * y;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  Eigen::VectorXd w = ldlt.solve(b);
  if (lambda == 0.0) {
    Eigen::VectorXd d = ldlt.vectorD();
    double dmax = d.cwiseAbs().maxCoeff();
    double dmin = d.cwiseAbs().minCoeff();
    double resid = (a * w - b).norm();
    if (dmax <= 0.0 || dmin <= 1e-10 * dmax || resid > 1e-8 * (b.norm() + 1.0)) {
      throw ValidationError("ridge: normal equations are singular at lambda=0; pass lambda > 0");
    }
  }
  RidgeModel model;
  model.weights = w.head(p);
  model.bias = w(p);
  Eigen::VectorXd pred = phi * w;
  model.train_nmse = normalized_mse(pred, y);
  return model;
}

double normalized_mse(const Eigen::VectorXd& pred, const Eigen::VectorXd& y) {
  if (pred.size() != y.size() || y.size() == 0) throw ValidationError("normalized_mse: bad sizes");
  double n = static_cast<double>(y.size());
  double mse = (pred - y).squaredNorm() / n;
  double mean = y.mean();
  double var = (y.array() - mean).square().sum() / n;
  if (var == 0.0) return mse == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return mse / var;
}

LogisticModel fit_logistic(const Eigen::MatrixXd& x, const std::vector<int>& y,
                           const LogisticConfig& cfg) {
  long n = x.rows(), p = x.cols();
  if (static_cast<long>(y.size()) != n) throw ValidationError("logistic: label count mismatch");
  if (n == 0) throw ValidationError("logistic: empty training set");
  for (int v : y) {
    if (v != 1 && v != -1) throw ValidationError("logistic: labels must be +-1");
  }
  Eigen::VectorXd yv(n);
  for (long i = 0; i < n; ++i) yv(i) = y[i];

  Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
  double b = 0.0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Eigen::VectorXd margin = yv.array() * (x * w).array() + yv.array() * b;
    // d/dm log(1+exp(-m)) = -sigmoid(-m)
    Eigen::VectorXd s(n);
    double loss = 0.0;
    for (long i = 0; i < n; ++i) {
      double m = margin(i);
      s(i) = 1.0 / (1.0 + std::exp(m));  // sigmoid(-m), safe: exp(m) may inf -> s=0
      loss += m > 30 ? 0.0 : (m < -30 ? -m : std::log1p(std::exp(-m)));
    }
    loss = loss / n + 0.5 * cfg.l2 * w.squaredNorm();
    if (!std::isfinite(loss)) {
      throw ValidationError("logistic: loss diverged; lower the learning rate");
    }
    Eigen::VectorXd coef = -(s.array() * yv.array()).matrix() / static_cast<double>(n);
    Eigen::VectorXd gw = x.transpose() * coef + cfg.l2 * w;
    double gb = coef.sum();
    w -= cfg.lr * gw;
    b -= cfg.lr * gb;
  }

  LogisticModel model;
  model.weights = w;
  model.bias = b;
  long correct = 0;
  Eigen::VectorXd z = x * w;
  for (long i = 0; i < n; ++i) {
    int pred = (z(i) + b) >= 0 ? 1 : -1;
    if (pred == y[i]) ++correct;
  }
  model.train_accuracy = static_cast<double>(correct) / n;
  return model;
}

std::vector<int> LogisticModel::predict(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd z = x * weights;
  std::vector<int> out(x.rows());
  for (long i = 0; i < x.rows(); ++i) out[i] = (z(i) + bias) >= 0 ? 1 : -1;
  return out;
}

}  // namespace egonet
