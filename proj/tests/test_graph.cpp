#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "egonet/errors.hpp"
#include "egonet/graph.hpp"
#include "egonet/rng.hpp"
#include "helpers.hpp"

using namespace egonet;

TEST_CASE("from_edges builds sorted adjacency") {
  Graph g = Graph::from_edges(4, {{2, 1}, {0, 3}, {0, 1}});
  CHECK(g.num_nodes() == 4);
  CHECK(g.num_edges() == 3);
  CHECK(g.degree(0) == 2);
  CHECK(g.degree(1) == 2);
  CHECK(g.degree(2) == 1);
  CHECK(g.degree(3) == 1);
  auto nb = g.neighbors(0);
  REQUIRE(nb.size() == 2);
  CHECK(nb[0] == 1);
  CHECK(nb[1] == 3);
  CHECK(g.has_edge(1, 2));
  CHECK(g.has_edge(2, 1));
  CHECK_FALSE(g.has_edge(2, 3));
  CHECK(g.max_degree() == 2);
  CHECK(g.mean_degree() == doctest::Approx(6.0 / 4.0));
}

TEST_CASE("from_edges validates input") {
  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 3}}), ValidationError);
  CHECK_THROWS_AS(Graph::from_edges(3, {{-1, 0}}), ValidationError);
  CHECK_THROWS_AS(Graph::from_edges(3, {{1, 1}}), ValidationError);
  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 1}, {1, 0}}), ValidationError);
}

TEST_CASE("edge list parsing handles comments, blanks, and hints") {
  std::string text = "# a comment\n\n0 1\n1 2\n";
  Graph g = load_edge_list(text);
  CHECK(g.num_nodes() == 3);
  CHECK(g.num_edges() == 2);

  Graph with_hint = load_edge_list("# n=5\n0 1\n");
  CHECK(with_hint.num_nodes() == 5);

  ParseOptions opts;
  opts.expected_nodes = 7;
  CHECK(load_edge_list("0 1\n", opts).num_nodes() == 7);
}

TEST_CASE("edge list parse errors carry line numbers") {
  try {
    load_edge_list("0 1\nbroken\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(load_edge_list("0\n"), ParseError);
  CHECK_THROWS_AS(load_edge_list("0 1 2\n"), ParseError);
  CHECK_THROWS_AS(load_edge_list("0 0\n"), ParseError);
  CHECK_THROWS_AS(load_edge_list("0 1\n0 1\n"), ParseError);
}

TEST_CASE("relabel maps arbitrary ids in first-occurrence order") {
  ParseOptions opts;
  opts.relabel = true;
  Graph g = load_edge_list("10 40\n40 7\n", opts);
  CHECK(g.num_nodes() == 3);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 2));
  CHECK_FALSE(g.has_edge(0, 2));
}

TEST_CASE("serialization round-trips, including isolated nodes") {
  Graph g = Graph::from_edges(6, {{0, 2}, {2, 4}});
  Graph back = load_edge_list(g.to_edge_list());
  CHECK(back.num_nodes() == 6);
  CHECK(back.edge_pairs() == g.edge_pairs());
}

TEST_CASE("node features expose a sorted alphabet containing zero") {
  NodeFeatures f(4, {5, 2, 5, 2});
  CHECK(f.alphabet() == std::vector<int>{0, 2, 5});
  CHECK(f.label(0) == 5);
  CHECK(f.alphabet_index(0) == 2);
  CHECK(f.alphabet_index(1) == 1);
  CHECK_THROWS_AS(NodeFeatures(2, {1}), ValidationError);
  CHECK_THROWS_AS(NodeFeatures(2, {-1, 0}), ValidationError);

  NodeFeatures u = NodeFeatures::uniform(3);
  CHECK(u.alphabet() == std::vector<int>{0});
}

TEST_CASE("feature files default missing nodes to zero") {
  NodeFeatures f = NodeFeatures::load("2 7\n0 3\n", 4);
  CHECK(f.label(0) == 3);
  CHECK(f.label(1) == 0);
  CHECK(f.label(2) == 7);
  CHECK(f.label(3) == 0);
  CHECK_THROWS_AS(NodeFeatures::load("9 1\n", 4), ParseError);
  CHECK_THROWS_AS(NodeFeatures::load("0 -2\n", 4), ParseError);
}

TEST_CASE("permutation relabels nodes consistently") {
  Rng rng(11);
  Graph g = test_util::random_graph(8, 0.4, rng);
  NodeFeatures f(8, test_util::random_labels(8, 3, rng));
  std::vector<int> perm = test_util::random_permutation(8, rng);
  Graph pg = g.permuted(perm);
  NodeFeatures pf = f.permuted(perm);
  for (int u = 0; u < 8; ++u) {
    CHECK(pg.degree(perm[u]) == g.degree(u));
    CHECK(pf.label(perm[u]) == f.label(u));
  }
  for (auto [u, v] : g.edge_pairs()) CHECK(pg.has_edge(perm[u], perm[v]));
}

TEST_CASE("rooted validates the root index") {
  Graph g = Graph::from_edges(3, {{0, 1}});
  CHECK(rooted(g, 2).root == 2);
  CHECK_THROWS_AS(rooted(g, 3), ValidationError);
  CHECK_THROWS_AS(rooted(g, -1), ValidationError);
}

TEST_CASE("collections enforce unique names and matching feature sizes") {
  GraphCollection c;
  c.add("a", Graph::from_edges(2, {{0, 1}}));
  CHECK_THROWS_AS(c.add("a", Graph::from_edges(2, {{0, 1}})), ValidationError);
  CHECK_THROWS_AS(c.add("b", Graph::from_edges(2, {{0, 1}}), NodeFeatures::uniform(3)),
                  ValidationError);
  CHECK(c.size() == 1);
  CHECK(c[0].features.alphabet() == std::vector<int>{0});
}
