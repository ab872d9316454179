#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "egonet/constructions.hpp"
#include "egonet/errors.hpp"
#include "egonet/operators.hpp"
#include "egonet/rng.hpp"
#include "helpers.hpp"

using namespace egonet;

TEST_CASE("operator text forms parse and round-trip") {
  for (const char* text : {"I", "D", "A^1", "A^7", "N(1/2,1/2)^3", "N(1,0)^1", "SL(1)^2",
                           "minpow(2)", "dist(3)", "nds(2)", "BH(8,auto)^1", "BH(8,3/2)^4"}) {
    OperatorSpec spec = OperatorSpec::parse(text);
    CHECK(spec.to_string() == text);
    CHECK(OperatorSpec::parse(spec.to_string()) == spec);
  }
  CHECK(OperatorSpec::parse("A") == OperatorSpec::parse("A^1"));
  CHECK(OperatorSpec::parse("N(0.5,0.5)^2") == OperatorSpec::parse("N(1/2,1/2)^2"));
}

TEST_CASE("malformed operators are rejected") {
  for (const char* text : {"", "B", "A^0", "A^-1", "minpow(0)", "minpow(2)^2", "dist(2)^3",
                           "nds(1)^2", "N(1/2)^1", "SL(-1)^1", "BH(8)^1", "A^x", "I^2"}) {
    CHECK_THROWS_AS(OperatorSpec::parse(text), ParseError);
  }
}

TEST_CASE("families parse comma lists and power ranges") {
  OperatorFamily fam = OperatorFamily::parse("I,A^1..A^3,dist(2)");
  REQUIRE(fam.ops.size() == 5);
  CHECK(fam.to_string() == "I,A^1,A^2,A^3,dist(2)");
  CHECK(fam.max_hop() == 3);

  OperatorFamily shorthand = OperatorFamily::parse("A^2..4");
  CHECK(shorthand.to_string() == "A^2,A^3,A^4");

  OperatorFamily bh = OperatorFamily::parse("BH(8,auto)^1..3");
  CHECK(bh.ops.size() == 3);
  CHECK(bh.ops[2].power == 3);

  CHECK_THROWS_AS(OperatorFamily::parse(""), ParseError);
  CHECK_THROWS_AS(OperatorFamily::parse("A^3..A^1"), ParseError);
  CHECK_THROWS_AS(OperatorFamily::parse("A^1..N(1,1)^3"), ParseError);
}

TEST_CASE("hop counts follow operator locality") {
  CHECK(OperatorSpec::parse("I").hop() == 0);
  CHECK(OperatorSpec::parse("D").hop() == 1);
  CHECK(OperatorSpec::parse("A^4").hop() == 4);
  CHECK(OperatorSpec::parse("N(1/2,1/2)^3").hop() == 3);
  CHECK(OperatorSpec::parse("minpow(5)").hop() == 5);
  CHECK(OperatorSpec::parse("dist(2)").hop() == 2);
  CHECK(OperatorSpec::parse("nds(1)").hop() == 2);
}

TEST_CASE("tower admissibility matches entry types") {
  OperatorFamily ints = OperatorFamily::parse("I,D,A^2,minpow(2),dist(3)");
  CHECK(ints.auto_tower() == Tower::ExactInteger);
  OperatorFamily rats = OperatorFamily::parse("I,N(1,0)^2,nds(2)");
  CHECK(rats.auto_tower() == Tower::ExactRational);
  OperatorFamily floats = OperatorFamily::parse("N(1/2,1/2)^2");
  CHECK(floats.auto_tower() == Tower::Float);
  CHECK(OperatorFamily::parse("SL(1)^2").auto_tower() == Tower::Float);
  CHECK(OperatorFamily::parse("BH(8,auto)^1").auto_tower() == Tower::Float);

  CHECK_THROWS_AS(rats.require_tower(Tower::ExactInteger), ValidationError);
  CHECK_THROWS_AS(floats.require_tower(Tower::ExactRational), ValidationError);
  CHECK_NOTHROW(ints.require_tower(Tower::Float));
}

namespace {

Matrix<BigInt> ones_column(int n) {
  Matrix<BigInt> x(n, 1);
  for (int i = 0; i < n; ++i) x(i, 0) = 1;
  return x;
}

}  // namespace

TEST_CASE("adjacency powers match the dense oracle") {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    Graph g = test_util::random_graph(7, 0.45, rng);
    for (int k = 1; k <= 4; ++k) {
      auto dense = test_util::dense_adjacency_power(g, k);
      Matrix<BigInt> out =
          apply_operator(OperatorSpec::parse("A^" + std::to_string(k)), g, ones_column(7));
      for (int i = 0; i < 7; ++i) {
        BigInt row_sum = 0;
        for (int j = 0; j < 7; ++j) row_sum += dense[i][j];
        CHECK(out(i, 0) == row_sum);
      }
    }
  }
}

TEST_CASE("binarized powers and distance indicators match oracles") {
  Rng rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    Graph g = test_util::random_graph(7, 0.35, rng);
    auto dist = test_util::all_pairs_distances(g);
    for (int k = 1; k <= 3; ++k) {
      auto dense = test_util::dense_adjacency_power(g, k);
      Matrix<BigInt> minp =
          apply_operator(OperatorSpec::parse("minpow(" + std::to_string(k) + ")"), g,
                         ones_column(7));
      Matrix<BigInt> dk = apply_operator(OperatorSpec::parse("dist(" + std::to_string(k) + ")"),
                                         g, ones_column(7));
      for (int i = 0; i < 7; ++i) {
        BigInt min_sum = 0, dist_sum = 0;
        for (int j = 0; j < 7; ++j) {
          if (dense[i][j] > 0) min_sum += 1;
          if (j != i && dist[i][j] == k) dist_sum += 1;
        }
        CHECK(minp(i, 0) == min_sum);
        CHECK(dk(i, 0) == dist_sum);
      }
    }
  }
}

TEST_CASE("degree and neighbor-degree-sum operators") {
  Graph g = Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}});
  Matrix<BigInt> d = apply_operator(OperatorSpec::parse("D"), g, ones_column(4));
  CHECK(d(0, 0) == 3);
  CHECK(d(3, 0) == 1);

  Matrix<BigRat> x(4, 1);
  for (int i = 0; i < 4; ++i) x(i, 0) = 1;
  Matrix<BigRat> nds = apply_operator(OperatorSpec::parse("nds(1)"), g, x);
  // node 3: single neighbor of degree 3 -> 1/3
  CHECK(nds(3, 0) == BigRat(1, 3));
  // node 0: neighbors have degrees 2, 2, 1 -> 1/2 + 1/2 + 1 = 2
  CHECK(nds(0, 0) == BigRat(2));
}

TEST_CASE("normalized adjacency is exact in the rational tower") {
  Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}});
  Matrix<BigRat> x(3, 1);
  for (int i = 0; i < 3; ++i) x(i, 0) = 1;
  // N(1,0): rows scaled by 1/deg; row sums are exactly 1 on every non-isolated node.
  Matrix<BigRat> out = apply_operator(OperatorSpec::parse("N(1,0)^3"), g, x);
  for (int i = 0; i < 3; ++i) CHECK(out(i, 0) == BigRat(1));

  CHECK_THROWS_AS(apply_operator(OperatorSpec::parse("N(1/2,1/2)^1"), g, x), ValidationError);
}

TEST_CASE("float normalization agrees with the rational tower") {
  Rng rng(43);
  Graph g = test_util::random_graph(8, 0.5, rng);
  Matrix<BigRat> xr(8, 1);
  Matrix<double> xf(8, 1);
  for (int i = 0; i < 8; ++i) {
    xr(i, 0) = 1;
    xf(i, 0) = 1.0;
  }
  OperatorSpec spec = OperatorSpec::parse("N(2,1)^2");
  Matrix<BigRat> rat = apply_operator(spec, g, xr);
  Matrix<double> flt = apply_operator(spec, g, xf);
  for (int i = 0; i < 8; ++i) {
    CHECK(flt(i, 0) == doctest::Approx(static_cast<double>(rat(i, 0))).epsilon(1e-12));
  }
}

TEST_CASE("self-loop normalization fixes the all-ones vector on regular graphs") {
  Graph g = complete_graph(4);
  Matrix<double> x(4, 1);
  for (int i = 0; i < 4; ++i) x(i, 0) = 1.0;
  Matrix<double> out = apply_operator(OperatorSpec::parse("SL(1)^3"), g, x);
  for (int i = 0; i < 4; ++i) CHECK(out(i, 0) == doctest::Approx(1.0));

  // Isolated nodes stay zero instead of dividing by zero.
  Graph iso = Graph::from_edges(2, {});
  Matrix<double> x2(2, 1);
  x2(0, 0) = 1.0;
  x2(1, 0) = 1.0;
  Matrix<double> out2 = apply_operator(OperatorSpec::parse("SL(0)^1"), iso, x2);
  CHECK(out2(0, 0) == 0.0);
  CHECK(out2(1, 0) == 0.0);
}

TEST_CASE("shifted deformed Laplacian matches its dense definition") {
  Rng rng(44);
  Graph g = test_util::random_graph(8, 0.5, rng);
  double r = 1.3, kappa = 8.0;
  int n = 8;
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    m[i][i] = kappa - ((r * r - 1) + g.degree(i));
  }
  for (auto [u, v] : g.edge_pairs()) {
    m[u][v] += r;
    m[v][u] += r;
  }
  Matrix<double> x(n, 1);
  for (int i = 0; i < n; ++i) x(i, 0) = 0.1 * i - 0.3;
  Matrix<double> out = apply_operator(OperatorSpec::parse("BH(8,13/10)^2"), g, x);
  // dense (kappa I - H)^2 x
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = x(i, 0);
  for (int rep = 0; rep < 2; ++rep) {
    std::vector<double> next(n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) next[i] += m[i][j] * v[j];
    }
    v = std::move(next);
  }
  for (int i = 0; i < n; ++i) CHECK(out(i, 0) == doctest::Approx(v[i]).epsilon(1e-12));
}

TEST_CASE("sparse symmetric matvec and Gershgorin bound") {
  SparseSymmetric m = SparseSymmetric::from_triplets(
      3, {{0, 0, 2.0}, {0, 1, -1.0}, {1, 1, 2.0}, {1, 2, -1.0}, {2, 2, 2.0}});
  std::vector<double> y = m.matvec({1.0, 1.0, 1.0});
  CHECK(y[0] == doctest::Approx(1.0));
  CHECK(y[1] == doctest::Approx(0.0));
  CHECK(y[2] == doctest::Approx(1.0));
  CHECK(m.diagonal(1) == doctest::Approx(2.0));
  CHECK(m.gershgorin_lower_bound() == doctest::Approx(0.0));
}

TEST_CASE("power iteration finds leading eigenpairs of a diagonal matrix") {
  SparseSymmetric m = SparseSymmetric::from_triplets(2, {{0, 0, 3.0}, {1, 1, 1.0}});
  EigenResult eig = leading_eigenvectors(m, 2);
  REQUIRE(eig.values.size() == 2);
  CHECK(eig.values[0] == doctest::Approx(3.0));
  CHECK(eig.values[1] == doctest::Approx(1.0));
  CHECK(std::abs(eig.vectors[0][0]) == doctest::Approx(1.0));
  CHECK(std::abs(eig.vectors[0][1]) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("power iteration handles dominant negative shifts") {
  // diag(-5, 2): the algebraically largest eigenvalue (2) must win even though
  // -5 dominates in magnitude.
  SparseSymmetric m = SparseSymmetric::from_triplets(2, {{0, 0, -5.0}, {1, 1, 2.0}});
  EigenResult eig = leading_eigenvectors(m, 1);
  CHECK(eig.values[0] == doctest::Approx(2.0));
}

TEST_CASE("hexagon shifted operator has eigenvalue 5 + 2 sqrt 2 on the ones direction") {
  Graph hex = cycle_graph(6);
  double r = std::sqrt(2.0);
  SparseSymmetric m = bethe_hessian_shifted(hex, 8.0, r);
  EigenResult eig = leading_eigenvectors(m, 1);
  CHECK(eig.values[0] == doctest::Approx(5.0 + 2.0 * std::sqrt(2.0)));
  double inv = 1.0 / std::sqrt(6.0);
  for (int i = 0; i < 6; ++i) CHECK(std::abs(eig.vectors[0][i]) == doctest::Approx(inv));
}

TEST_CASE("power iteration reports non-convergence") {
  Graph hex = cycle_graph(6);
  SparseSymmetric m = bethe_hessian_shifted(hex, 8.0, std::sqrt(2.0));
  CHECK_THROWS_AS(leading_eigenvectors(m, 1, 1e-10, 2), ConvergenceError);
}
