#include "egonet/operators.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <queue>
#include <sstream>

#include "egonet/errors.hpp"
#include "egonet/rng.hpp"

namespace egonet {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

BigRat parse_rational(const std::string& raw) {
  std::string s = trim(raw);
  if (s.empty()) throw ParseError("empty number");
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      BigInt num(s.substr(0, slash));
      BigInt den(s.substr(slash + 1));
      if (den == 0) throw ParseError("zero denominator in '" + s + "'");
      return BigRat(num, den);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return BigRat(BigInt(s));
    std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
    if (tail.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("bad number '" + s + "'");
    }
    bool neg = !head.empty() && head[0] == '-';
    if (head == "-" || head.empty()) head = neg ? "-0" : "0";
    BigInt scale = 1;
    for (size_t i = 0; i < tail.size(); ++i) scale *= 10;
    BigInt whole(head);
    BigInt frac = tail.empty() ? BigInt(0) : BigInt(tail);
    BigInt num = whole * scale + (neg ? -frac : frac);
    return BigRat(num, scale);
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("bad number '" + s + "'");
  }
}

std::string rational_str(const BigRat& v) {
  auto num = boost::multiprecision::numerator(v);
  auto den = boost::multiprecision::denominator(v);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

bool is_integer(const BigRat& v) { return boost::multiprecision::denominator(v) == 1; }

long long to_ll(const BigRat& v) {
  return static_cast<long long>(boost::multiprecision::numerator(v));
}

int parse_power_suffix(std::string& tok) {
  // Splits a trailing "^k" off tok (top level only; '^' never nests here).
  auto caret = tok.rfind('^');
  if (caret == std::string::npos) return 1;
  std::string exp = trim(tok.substr(caret + 1));
  tok = trim(tok.substr(0, caret));
  try {
    size_t pos = 0;
    int k = std::stoi(exp, &pos);
    if (pos != exp.size()) throw std::invalid_argument(exp);
    return k;
  } catch (const std::exception&) {
    throw ParseError("bad exponent '" + exp + "'");
  }
}

std::vector<std::string> split_args(const std::string& inner) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : inner) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

// "name(arg,...)" -> args, or nullopt if tok doesn't start with name + '('.
std::optional<std::vector<std::string>> match_call(const std::string& tok,
                                                   const std::string& name) {
  if (tok.rfind(name + "(", 0) != 0) return std::nullopt;
  if (tok.back() != ')') throw ParseError("missing ')' in '" + tok + "'");
  return split_args(tok.substr(name.size() + 1, tok.size() - name.size() - 2));
}

int parse_int_arg(const std::string& s, const std::string& ctx) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad integer '" + s + "' in " + ctx);
  }
}

}  // namespace

OperatorSpec OperatorSpec::parse(const std::string& text) {
  std::string tok = trim(text);
  if (tok.empty()) throw ParseError("empty operator token");
  OperatorSpec spec;
  if (tok == "I") {
    spec.kind = Kind::Identity;
    return spec;
  }
  if (tok == "D") {
    spec.kind = Kind::Degree;
    return spec;
  }

  int power = parse_power_suffix(tok);
  auto need_power = [&](const char* name) {
    if (power < 1) throw ParseError(std::string(name) + ": exponent must be >= 1");
  };

  if (tok == "A") {
    need_power("A");
    spec.kind = Kind::AdjacencyPower;
    spec.power = power;
    return spec;
  }
  if (auto args = match_call(tok, "N")) {
    if (args->size() != 2) throw ParseError("N takes two arguments: N(alpha,beta)");
    need_power("N");
    spec.kind = Kind::NormalizedAdjacencyPower;
    spec.alpha = parse_rational((*args)[0]);
    spec.beta = parse_rational((*args)[1]);
    spec.power = power;
    return spec;
  }
  if (auto args = match_call(tok, "SL")) {
    if (args->size() != 1) throw ParseError("SL takes one argument: SL(epsilon)");
    need_power("SL");
    spec.kind = Kind::SelfLoopNormalizedPower;
    spec.epsilon = parse_rational((*args)[0]);
    if (spec.epsilon < 0) throw ParseError("SL: epsilon must be >= 0");
    spec.power = power;
    return spec;
  }
  if (auto args = match_call(tok, "BH")) {
    if (args->size() != 2) throw ParseError("BH takes two arguments: BH(kappa,r|auto)");
    need_power("BH");
    spec.kind = Kind::BetheHessianShifted;
    spec.kappa = parse_rational((*args)[0]);
    if ((*args)[1] == "auto") {
      spec.r = std::nullopt;
    } else {
      spec.r = parse_rational((*args)[1]);
    }
    spec.power = power;
    return spec;
  }
  if (power != 1) throw ParseError("'" + tok + "' does not take a '^' exponent");
  if (auto args = match_call(tok, "minpow")) {
    if (args->size() != 1) throw ParseError("minpow takes one argument: minpow(k)");
    spec.kind = Kind::WalkBinarized;
    spec.power = parse_int_arg((*args)[0], "minpow");
    if (spec.power < 1) throw ParseError("minpow: k must be >= 1");
    return spec;
  }
  if (auto args = match_call(tok, "dist")) {
    if (args->size() != 1) throw ParseError("dist takes one argument: dist(k)");
    spec.kind = Kind::DistanceExact;
    spec.power = parse_int_arg((*args)[0], "dist");
    if (spec.power < 1) throw ParseError("dist: k must be >= 1");
    return spec;
  }
  if (auto args = match_call(tok, "nds")) {
    if (args->size() != 1) throw ParseError("nds takes one argument: nds(alpha)");
    spec.kind = Kind::NeighborDegreeSum;
    spec.alpha = parse_rational((*args)[0]);
    return spec;
  }
  throw ParseError("unknown operator '" + trim(text) + "'");
}

std::string OperatorSpec::to_string() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Identity: return "I";
    case Kind::Degree: return "D";
    case Kind::AdjacencyPower:
      os << "A^" << power;
      break;
    case Kind::NormalizedAdjacencyPower:
      os << "N(" << rational_str(alpha) << "," << rational_str(beta) << ")^" << power;
      break;
    case Kind::SelfLoopNormalizedPower:
      os << "SL(" << rational_str(epsilon) << ")^" << power;
      break;
    case Kind::WalkBinarized:
      os << "minpow(" << power << ")";
      break;
    case Kind::DistanceExact:
      os << "dist(" << power << ")";
      break;
    case Kind::NeighborDegreeSum:
      os << "nds(" << rational_str(alpha) << ")";
      break;
    case Kind::BetheHessianShifted:
      os << "BH(" << rational_str(kappa) << "," << (r ? rational_str(*r) : "auto") << ")^"
         << power;
      break;
  }
  return os.str();
}

int OperatorSpec::hop() const {
  switch (kind) {
    case Kind::Identity: return 0;
    case Kind::Degree: return 1;
    case Kind::NeighborDegreeSum: return 2;
    default: return power;
  }
}

bool OperatorSpec::integer_entries() const {
  switch (kind) {
    case Kind::Identity:
    case Kind::Degree:
    case Kind::AdjacencyPower:
    case Kind::WalkBinarized:
    case Kind::DistanceExact:
      return true;
    default:
      return false;
  }
}

bool OperatorSpec::rational_entries() const {
  if (integer_entries()) return true;
  switch (kind) {
    case Kind::NormalizedAdjacencyPower:
      return is_integer(alpha) && is_integer(beta);
    case Kind::NeighborDegreeSum:
      return is_integer(alpha);
    default:
      return false;
  }
}

OperatorFamily OperatorFamily::parse(const std::string& text) {
  // Split on commas outside parentheses.
  std::vector<std::string> tokens;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      tokens.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  tokens.push_back(cur);
  if (depth != 0) throw ParseError("unbalanced parentheses in '" + text + "'");

  OperatorFamily fam;
  for (const auto& raw : tokens) {
    std::string tok = trim(raw);
    if (tok.empty()) throw ParseError("empty operator token in '" + text + "'");
    auto dots = tok.find("..");
    if (dots == std::string::npos) {
      fam.ops.push_back(OperatorSpec::parse(tok));
      continue;
    }
    // Power range: "A^1..A^5" or "A^1..5".
    OperatorSpec lo = OperatorSpec::parse(tok.substr(0, dots));
    if (lo.kind == OperatorSpec::Kind::Identity || lo.kind == OperatorSpec::Kind::Degree ||
        lo.kind == OperatorSpec::Kind::NeighborDegreeSum) {
      throw ParseError("'" + tok + "': this operator has no power range");
    }
    std::string rhs = trim(tok.substr(dots + 2));
    int hi_power;
    if (rhs.find_first_not_of("0123456789") == std::string::npos && !rhs.empty()) {
      hi_power = parse_int_arg(rhs, "power range");
    } else {
      OperatorSpec hi = OperatorSpec::parse(rhs);
      OperatorSpec hi_base = hi;
      hi_base.power = lo.power;
      if (!(hi_base == lo)) {
        throw ParseError("'" + tok + "': range endpoints differ in more than the power");
      }
      hi_power = hi.power;
    }
    if (hi_power < lo.power) throw ParseError("'" + tok + "': descending power range");
    for (int k = lo.power; k <= hi_power; ++k) {
      OperatorSpec s = lo;
      s.power = k;
      fam.ops.push_back(s);
    }
  }
  if (fam.ops.empty()) throw ParseError("empty operator family");
  return fam;
}

std::string OperatorFamily::to_string() const {
  std::string out;
  for (size_t i = 0; i < ops.size(); ++i) {
    if (i) out += ",";
    out += ops[i].to_string();
  }
  return out;
}

int OperatorFamily::max_hop() const {
  int h = 0;
  for (const auto& op : ops) h = std::max(h, op.hop());
  return h;
}

Tower OperatorFamily::auto_tower() const {
  bool all_int = true, all_rat = true;
  for (const auto& op : ops) {
    all_int = all_int && op.integer_entries();
    all_rat = all_rat && op.rational_entries();
  }
  if (all_int) return Tower::ExactInteger;
  if (all_rat) return Tower::ExactRational;
  return Tower::Float;
}

void OperatorFamily::require_tower(Tower t) const {
  for (const auto& op : ops) {
    bool ok = t == Tower::Float || (t == Tower::ExactInteger && op.integer_entries()) ||
              (t == Tower::ExactRational && op.rational_entries());
    if (!ok) {
      throw ValidationError("operator " + op.to_string() + " is not computable in the " +
                            tower_name(t) + " tower");
    }
  }
}

namespace {

// d^(-e) in tower T; zero-degree rows map to 0.
template <typename T>
T inv_degree_pow(int d, const BigRat& e) {
  if (d == 0) return T(0);
  if constexpr (std::is_same_v<T, double>) {
    double ed = static_cast<double>(boost::multiprecision::numerator(e)) /
                static_cast<double>(boost::multiprecision::denominator(e));
    return std::pow(static_cast<double>(d), -ed);
  } else if constexpr (std::is_same_v<T, BigRat>) {
    if (!is_integer(e)) throw ValidationError("non-integer exponent in rational tower");
    return rational_pow(BigRat(d), -to_ll(e));
  } else {
    throw ValidationError("degree normalization is not an integer operator");
  }
}

template <typename T>
Matrix<T> spmv(const Graph& g, const Matrix<T>& x) {
  Matrix<T> y(x.rows(), x.cols());
  for (int i = 0; i < g.num_nodes(); ++i) {
    for (int j : g.neighbors(i)) {
      for (int c = 0; c < x.cols(); ++c) y(i, c) += x(j, c);
    }
  }
  return y;
}

template <typename T>
void scale_rows(const Graph& g, Matrix<T>& x, const std::vector<T>& s) {
  for (int i = 0; i < g.num_nodes(); ++i) {
    for (int c = 0; c < x.cols(); ++c) x(i, c) *= s[i];
  }
}

// Rows of min(A^k, 1) as bitsets: bit j of row i set iff some walk of length
// exactly k joins i to j. The diagonal falls out of the product untouched.
std::vector<std::vector<uint64_t>> walk_reach_rows(const Graph& g, int k) {
  int n = g.num_nodes();
  size_t words = (static_cast<size_t>(n) + 63) / 64;
  std::vector<std::vector<uint64_t>> adj(n, std::vector<uint64_t>(words, 0));
  for (int i = 0; i < n; ++i) {
    for (int j : g.neighbors(i)) adj[i][j / 64] |= uint64_t{1} << (j % 64);
  }
  std::vector<std::vector<uint64_t>> cur = adj;
  for (int step = 1; step < k; ++step) {
    std::vector<std::vector<uint64_t>> next(n, std::vector<uint64_t>(words, 0));
    for (int i = 0; i < n; ++i) {
      for (size_t w = 0; w < words; ++w) {
        uint64_t bits = cur[i][w];
        while (bits) {
          int j = static_cast<int>(w * 64 + __builtin_ctzll(bits));
          bits &= bits - 1;
          for (size_t t = 0; t < words; ++t) next[i][t] |= adj[j][t];
        }
      }
    }
    cur = std::move(next);
  }
  return cur;
}

template <typename T>
Matrix<T> apply_walk_binarized(const Graph& g, int k, const Matrix<T>& x) {
  auto rows = walk_reach_rows(g, k);
  Matrix<T> y(x.rows(), x.cols());
  for (int i = 0; i < g.num_nodes(); ++i) {
    for (size_t w = 0; w < rows[i].size(); ++w) {
      uint64_t bits = rows[i][w];
      while (bits) {
        int j = static_cast<int>(w * 64 + __builtin_ctzll(bits));
        bits &= bits - 1;
        for (int c = 0; c < x.cols(); ++c) y(i, c) += x(j, c);
      }
    }
  }
  return y;
}

template <typename T>
Matrix<T> apply_distance_exact(const Graph& g, int k, const Matrix<T>& x) {
  int n = g.num_nodes();
  Matrix<T> y(x.rows(), x.cols());
  std::vector<int> depth(n), frontier;
  for (int src = 0; src < n; ++src) {
    std::fill(depth.begin(), depth.end(), -1);
    depth[src] = 0;
    frontier.assign(1, src);
    for (int d = 0; d < k && !frontier.empty(); ++d) {
      std::vector<int> next;
      for (int u : frontier) {
        for (int v : g.neighbors(u)) {
          if (depth[v] == -1) {
            depth[v] = d + 1;
            next.push_back(v);
          }
        }
      }
      frontier = std::move(next);
    }
    for (int v : frontier) {  // nodes at distance exactly k; src itself only if k=0
      for (int c = 0; c < x.cols(); ++c) y(src, c) += x(v, c);
    }
  }
  return y;
}

}  // namespace

template <typename T>
Matrix<T> apply_operator(const OperatorSpec& spec, const Graph& g, const Matrix<T>& x) {
  if (x.rows() != g.num_nodes()) throw ValidationError("operator input row count != node count");
  if constexpr (std::is_same_v<T, BigInt>) {
    if (!spec.integer_entries()) {
      throw ValidationError("operator " + spec.to_string() + " is not computable in the int tower");
    }
  } else if constexpr (std::is_same_v<T, BigRat>) {
    if (!spec.rational_entries()) {
      throw ValidationError("operator " + spec.to_string() +
                            " is not computable in the rational tower");
    }
  }

  using Kind = OperatorSpec::Kind;
  switch (spec.kind) {
    case Kind::Identity:
      return x;
    case Kind::Degree: {
      Matrix<T> y = x;
      std::vector<T> s(g.num_nodes());
      for (int i = 0; i < g.num_nodes(); ++i) s[i] = T(g.degree(i));
      scale_rows(g, y, s);
      return y;
    }
    case Kind::AdjacencyPower: {
      Matrix<T> y = x;
      for (int step = 0; step < spec.power; ++step) y = spmv(g, y);
      return y;
    }
    case Kind::NormalizedAdjacencyPower: {
      if constexpr (std::is_same_v<T, BigInt>) {
        break;
      } else {
        std::vector<T> da(g.num_nodes()), db(g.num_nodes());
        for (int i = 0; i < g.num_nodes(); ++i) {
          da[i] = inv_degree_pow<T>(g.degree(i), spec.alpha);
          db[i] = inv_degree_pow<T>(g.degree(i), spec.beta);
        }
        Matrix<T> y = x;
        for (int step = 0; step < spec.power; ++step) {
          scale_rows(g, y, db);
          y = spmv(g, y);
          scale_rows(g, y, da);
        }
        return y;
      }
    }
    case Kind::SelfLoopNormalizedPower: {
      if constexpr (!std::is_same_v<T, double>) {
        break;
      } else {
        double eps = static_cast<double>(boost::multiprecision::numerator(spec.epsilon)) /
                     static_cast<double>(boost::multiprecision::denominator(spec.epsilon));
        std::vector<double> s(g.num_nodes());
        for (int i = 0; i < g.num_nodes(); ++i) {
          double d = g.degree(i) + eps;
          s[i] = d > 0.0 ? 1.0 / std::sqrt(d) : 0.0;
        }
        Matrix<double> y = x;
        for (int step = 0; step < spec.power; ++step) {
          scale_rows(g, y, s);
          Matrix<double> z = spmv(g, y);
          for (int i = 0; i < g.num_nodes(); ++i) {
            for (int c = 0; c < y.cols(); ++c) z(i, c) += eps * y(i, c);
          }
          scale_rows(g, z, s);
          y = std::move(z);
        }
        return y;
      }
    }
    case Kind::WalkBinarized:
      return apply_walk_binarized(g, spec.power, x);
    case Kind::DistanceExact:
      return apply_distance_exact(g, spec.power, x);
    case Kind::NeighborDegreeSum: {
      if constexpr (std::is_same_v<T, BigInt>) {
        break;
      } else {
        std::vector<T> s(g.num_nodes());
        for (int i = 0; i < g.num_nodes(); ++i) s[i] = inv_degree_pow<T>(g.degree(i), spec.alpha);
        Matrix<T> y = x;
        scale_rows(g, y, s);
        return spmv(g, y);
      }
    }
    case Kind::BetheHessianShifted: {
      if constexpr (!std::is_same_v<T, double>) {
        break;
      } else {
        double kappa = static_cast<double>(boost::multiprecision::numerator(spec.kappa)) /
                       static_cast<double>(boost::multiprecision::denominator(spec.kappa));
        double r;
        if (spec.r) {
          r = static_cast<double>(boost::multiprecision::numerator(*spec.r)) /
              static_cast<double>(boost::multiprecision::denominator(*spec.r));
        } else {
          r = std::sqrt(g.mean_degree());
        }
        double diag = kappa - (r * r - 1.0);
        Matrix<double> y = x;
        for (int step = 0; step < spec.power; ++step) {
          Matrix<double> z = spmv(g, y);
          for (int i = 0; i < g.num_nodes(); ++i) {
            double di = diag - g.degree(i);
            for (int c = 0; c < y.cols(); ++c) z(i, c) = r * z(i, c) + di * y(i, c);
          }
          y = std::move(z);
        }
        return y;
      }
    }
  }
  throw ValidationError("operator " + spec.to_string() + " dispatched to an incompatible tower");
}

template Matrix<BigInt> apply_operator<BigInt>(const OperatorSpec&, const Graph&,
                                               const Matrix<BigInt>&);
template Matrix<BigRat> apply_operator<BigRat>(const OperatorSpec&, const Graph&,
                                               const Matrix<BigRat>&);
template Matrix<double> apply_operator<double>(const OperatorSpec&, const Graph&,
                                               const Matrix<double>&);

SparseSymmetric SparseSymmetric::from_triplets(
    int n, const std::vector<std::tuple<int, int, double>>& entries) {
  std::vector<std::map<int, double>> acc(n);
  for (auto [i, j, v] : entries) {
    if (i < 0 || i >= n || j < 0 || j >= n) throw ValidationError("triplet index out of range");
    acc[i][j] += v;
    if (i != j) acc[j][i] += v;
  }
  SparseSymmetric m(n);
  for (int i = 0; i < n; ++i) m.rows_[i].assign(acc[i].begin(), acc[i].end());
  return m;
}

std::vector<double> SparseSymmetric::matvec(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != n_) throw ValidationError("matvec size mismatch");
  std::vector<double> y(n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (auto [j, v] : rows_[i]) acc += v * x[j];
    y[i] = acc;
  }
  return y;
}

double SparseSymmetric::diagonal(int i) const {
  for (auto [j, v] : rows_[i]) {
    if (j == i) return v;
  }
  return 0.0;
}

double SparseSymmetric::gershgorin_lower_bound() const {
  double lo = 0.0;
  bool first = true;
  for (int i = 0; i < n_; ++i) {
    double d = 0.0, off = 0.0;
    for (auto [j, v] : rows_[i]) {
      if (j == i) {
        d = v;
      } else {
        off += std::abs(v);
      }
    }
    double b = d - off;
    if (first || b < lo) lo = b;
    first = false;
  }
  return lo;
}

SparseSymmetric bethe_hessian(const Graph& g, double r) {
  std::vector<std::tuple<int, int, double>> t;
  for (int i = 0; i < g.num_nodes(); ++i) {
    t.push_back({i, i, r * r - 1.0 + g.degree(i)});
  }
  for (auto [u, v] : g.edge_pairs()) t.push_back({u, v, -r});
  return SparseSymmetric::from_triplets(g.num_nodes(), t);
}

SparseSymmetric bethe_hessian_shifted(const Graph& g, double kappa, double r) {
  std::vector<std::tuple<int, int, double>> t;
  for (int i = 0; i < g.num_nodes(); ++i) {
    t.push_back({i, i, kappa - (r * r - 1.0) - g.degree(i)});
  }
  for (auto [u, v] : g.edge_pairs()) t.push_back({u, v, r});
  return SparseSymmetric::from_triplets(g.num_nodes(), t);
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace

EigenResult leading_eigenvectors(const SparseSymmetric& m, int count, double tol, int max_iter,
                                 uint64_t seed, double resid_tol) {
  int n = m.size();
  if (n == 0) throw ValidationError("empty matrix");
  if (count < 1 || count > 2 || count > n) throw ValidationError("eigenpair count must be 1 or 2");
  if (max_iter <= 0) max_iter = std::max(1000, 10 * n);

  // Shift so the algebraically largest eigenvalue is also largest in
  // magnitude; plain power iteration then cannot latch onto the bottom of the
  // spectrum.
  double shift = std::max(0.0, -m.gershgorin_lower_bound());

  EigenResult out;
  for (int idx = 0; idx < count; ++idx) {
    Rng rng(seed + 1000003ull * static_cast<uint64_t>(idx));
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.normal();
    for (const auto& prev : out.vectors) {
      double p = dot(v, prev);
      for (int i = 0; i < n; ++i) v[i] -= p * prev[i];
    }
    double vn = norm(v);
    if (vn == 0.0) {
      v.assign(n, 0.0);
      v[idx] = 1.0;
    } else {
      for (auto& c : v) c /= vn;
    }

    double rho = 0.0, prev_rho = 0.0, resid = 0.0;
    bool have_prev = false, converged = false;
    int it = 0;
    for (; it < max_iter; ++it) {
      std::vector<double> w = m.matvec(v);
      for (int i = 0; i < n; ++i) w[i] += shift * v[i];
      for (const auto& prev : out.vectors) {
        double p = dot(w, prev);
        for (int i = 0; i < n; ++i) w[i] -= p * prev[i];
      }
      rho = dot(v, w);
      double r2 = 0.0;
      for (int i = 0; i < n; ++i) {
        double d = w[i] - rho * v[i];
        r2 += d * d;
      }
      resid = std::sqrt(r2);
      double wn = norm(w);
      if (wn > 0.0) {
        for (int i = 0; i < n; ++i) v[i] = w[i] / wn;
      }
      if (have_prev && std::abs(rho - prev_rho) < tol && resid <= resid_tol) {
        converged = true;
        ++it;
        break;
      }
      prev_rho = rho;
      have_prev = true;
    }
    if (!converged) {
      std::ostringstream os;
      os << "power iteration: eigenpair " << idx + 1 << " did not converge in " << max_iter
         << " iterations (residual " << resid << ")";
      throw ConvergenceError(os.str());
    }
    out.values.push_back(rho - shift);
    out.vectors.push_back(v);
    out.iterations += it;
    out.residual = std::max(out.residual, resid);
  }

  // Deflation already orders by shifted magnitude = algebraic value; keep the
  // pairing explicit anyway in case of exact ties.
  if (out.values.size() == 2 && out.values[1] > out.values[0]) {
    std::swap(out.values[0], out.values[1]);
    std::swap(out.vectors[0], out.vectors[1]);
  }
  return out;
}

}  // namespace egonet
