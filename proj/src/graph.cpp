#include "egonet/graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "egonet/errors.hpp"

namespace egonet {

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n < 0) throw ValidationError("node count must be non-negative");
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n) {
      throw ValidationError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                            ") out of range for n=" + std::to_string(n));
    }
    if (u == v) throw ValidationError("self-loop at node " + std::to_string(u));
    auto key = std::minmax(u, v);
    if (!seen.insert({key.first, key.second}).second) {
      throw ValidationError("duplicate edge (" + std::to_string(key.first) + ", " +
                            std::to_string(key.second) + ")");
    }
  }

  Graph g;
  g.n_ = n;
  std::vector<int> deg(n, 0);
  for (auto [u, v] : seen) {
    ++deg[u];
    ++deg[v];
  }
  g.offsets_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + deg[i];
  g.adj_.resize(g.offsets_[n]);
  std::vector<int> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (auto [u, v] : seen) {
    g.adj_[cursor[u]++] = v;
    g.adj_[cursor[v]++] = u;
  }
  for (int i = 0; i < n; ++i) {
    std::sort(g.adj_.begin() + g.offsets_[i], g.adj_.begin() + g.offsets_[i + 1]);
  }
  return g;
}

int Graph::max_degree() const {
  int best = 0;
  for (int i = 0; i < n_; ++i) best = std::max(best, degree(i));
  return best;
}

double Graph::mean_degree() const {
  if (n_ == 0) return 0.0;
  return 2.0 * num_edges() / n_;
}

bool Graph::has_edge(int u, int v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<std::pair<int, int>> Graph::edge_pairs() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(num_edges());
  for (int u = 0; u < n_; ++u) {
    for (int v : neighbors(u)) {
      if (u < v) out.push_back({u, v});
    }
  }
  return out;
}

std::string Graph::to_edge_list() const {
  std::ostringstream os;
  os << "# n=" << n_ << "\n";
  for (auto [u, v] : edge_pairs()) os << u << " " << v << "\n";
  return os.str();
}

Graph Graph::permuted(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != n_) throw ValidationError("permutation size mismatch");
  std::vector<std::pair<int, int>> edges;
  for (auto [u, v] : edge_pairs()) edges.push_back({perm[u], perm[v]});
  return from_edges(n_, edges);
}

namespace {

// Strips comments, reports whether anything is left.
bool strip_line(std::string& line) {
  auto hash = line.find('#');
  if (hash != std::string::npos) line.resize(hash);
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  size_t b = 0, e = line.size();
  while (b < e && is_space(line[b])) ++b;
  while (e > b && is_space(line[e - 1])) --e;
  line = line.substr(b, e - b);
  return !line.empty();
}

long long parse_int_token(const std::string& tok, int line_no, const char* what) {
  try {
    size_t pos = 0;
    long long v = std::stoll(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": expected " + what + ", got '" + tok +
                     "'");
  }
}

}  // namespace

Graph load_edge_list(std::istream& in, const ParseOptions& opts) {
  std::vector<std::pair<long long, long long>> raw;
  std::optional<int> hinted_n;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // The serializer writes a "# n=<count>" hint so isolated nodes round-trip.
    auto hash = line.find('#');
    if (hash != std::string::npos) {
      std::string comment = line.substr(hash + 1);
      std::istringstream cs(comment);
      std::string tok;
      if (cs >> tok && tok.rfind("n=", 0) == 0) {
        try {
          hinted_n = std::stoi(tok.substr(2));
        } catch (const std::exception&) {
        }
      }
    }
    if (!strip_line(line)) continue;
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a >> b) || (ls >> extra)) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'u v'");
    }
    long long u = parse_int_token(a, line_no, "node id");
    long long v = parse_int_token(b, line_no, "node id");
    if (!opts.relabel && (u < 0 || v < 0)) {
      throw ParseError("line " + std::to_string(line_no) + ": negative node id");
    }
    raw.push_back({u, v});
  }

  std::vector<std::pair<int, int>> edges;
  int n = 0;
  if (opts.relabel) {
    std::unordered_map<long long, int> remap;
    auto id = [&](long long orig) {
      auto [it, inserted] = remap.try_emplace(orig, static_cast<int>(remap.size()));
      return it->second;
    };
    for (auto [u, v] : raw) edges.push_back({id(u), id(v)});
    n = static_cast<int>(remap.size());
  } else {
    long long max_id = -1;
    for (auto [u, v] : raw) max_id = std::max({max_id, u, v});
    n = static_cast<int>(max_id + 1);
    for (auto [u, v] : raw) edges.push_back({static_cast<int>(u), static_cast<int>(v)});
  }

  std::optional<int> declared = opts.expected_nodes ? opts.expected_nodes : hinted_n;
  if (declared) {
    if (n > *declared) {
      throw ParseError("node id " + std::to_string(n - 1) + " out of range: declared n=" +
                       std::to_string(*declared));
    }
    n = *declared;
  }
  try {
    return Graph::from_edges(n, edges);
  } catch (const ValidationError& e) {
    throw ParseError(e.what());
  }
}

Graph load_edge_list(const std::string& text, const ParseOptions& opts) {
  std::istringstream is(text);
  return load_edge_list(is, opts);
}

Graph load_edge_list_file(const std::string& path, const ParseOptions& opts) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return load_edge_list(in, opts);
}

NodeFeatures::NodeFeatures(int n, std::vector<int> labels) {
  if (static_cast<int>(labels.size()) != n) throw ValidationError("label count != node count");
  labels_ = std::move(labels);
  std::set<int> alpha{0};
  for (int l : labels_) {
    if (l < 0) throw ValidationError("negative feature label " + std::to_string(l));
    alpha.insert(l);
  }
  alphabet_.assign(alpha.begin(), alpha.end());
}

NodeFeatures NodeFeatures::uniform(int n) { return NodeFeatures(n, std::vector<int>(n, 0)); }

NodeFeatures NodeFeatures::load(std::istream& in, int n) {
  std::vector<int> labels(n, 0);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!strip_line(line)) continue;
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a >> b) || (ls >> extra)) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'node_id label'");
    }
    long long u = parse_int_token(a, line_no, "node id");
    long long l = parse_int_token(b, line_no, "label");
    if (u < 0 || u >= n) {
      throw ParseError("line " + std::to_string(line_no) + ": node id " + std::to_string(u) +
                       " out of range for n=" + std::to_string(n));
    }
    if (l < 0) throw ParseError("line " + std::to_string(line_no) + ": negative label");
    labels[static_cast<size_t>(u)] = static_cast<int>(l);
  }
  return NodeFeatures(n, std::move(labels));
}

NodeFeatures NodeFeatures::load(const std::string& text, int n) {
  std::istringstream is(text);
  return load(is, n);
}

NodeFeatures NodeFeatures::load_file(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return load(in, n);
}

int NodeFeatures::alphabet_index(int u) const {
  auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), labels_[u]);
  return static_cast<int>(it - alphabet_.begin());
}

NodeFeatures NodeFeatures::permuted(const std::vector<int>& perm) const {
  std::vector<int> out(labels_.size());
  for (size_t i = 0; i < labels_.size(); ++i) out[perm[i]] = labels_[i];
  return NodeFeatures(static_cast<int>(labels_.size()), std::move(out));
}

RootedGraph rooted(const Graph& g, int root) {
  if (root < 0 || root >= g.num_nodes()) {
    throw ValidationError("root " + std::to_string(root) + " out of range");
  }
  return RootedGraph{&g, root};
}

void GraphCollection::add(std::string name, Graph g, NodeFeatures f) {
  if (f.size() != g.num_nodes()) throw ValidationError("features size != graph size");
  for (const auto& e : entries_) {
    if (e.name == name) throw ValidationError("duplicate graph name '" + name + "'");
  }
  entries_.push_back({std::move(name), std::move(g), std::move(f)});
}

void GraphCollection::add(std::string name, Graph g) {
  NodeFeatures f = NodeFeatures::uniform(g.num_nodes());
  add(std::move(name), std::move(g), std::move(f));
}

}  // namespace egonet
