#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "egonet/constructions.hpp"
#include "egonet/errors.hpp"
#include "egonet/gamlp.hpp"
#include "egonet/rng.hpp"
#include "egonet/walks.hpp"
#include "egonet/wl.hpp"
#include "helpers.hpp"

using namespace egonet;

TEST_CASE("augment stacks operator blocks over one-hot columns") {
  Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}});
  NodeFeatures f(3, {0, 1, 0});
  OperatorFamily fam = OperatorFamily::parse("I,A^1");
  FeatureMatrix<BigInt> fm = augment<BigInt>(g, f, fam);
  REQUIRE(fm.values.cols() == 4);
  REQUIRE(fm.provenance.size() == 4);
  CHECK(fm.provenance[0].operator_index == 0);
  CHECK(fm.provenance[3].operator_index == 1);
  // I block: one-hot
  CHECK(fm.values(0, 0) == 1);
  CHECK(fm.values(0, 1) == 0);
  CHECK(fm.values(1, 1) == 1);
  // A block: neighbor label counts
  CHECK(fm.values(0, 2) == 0);  // node 0 sees one label-1 neighbor
  CHECK(fm.values(0, 3) == 1);
  CHECK(fm.values(1, 2) == 2);  // node 1 sees two label-0 neighbors
  CHECK(fm.values(1, 3) == 0);
}

TEST_CASE("exact feature classes separate a path by distance to the ends") {
  Graph p5 = Graph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  GraphCollection c;
  c.add("p5", p5);
  OperatorFamily fam = OperatorFamily::parse("I,A^1,A^2");
  EquivalenceReport rep = gamlp_node_classes(c, fam, KeyMode::ExactFeatures,
                                             Tower::ExactInteger, true);
  REQUIRE(rep.per_k.size() == 3);
  CHECK(rep.per_k[0].k == 0);
  CHECK(rep.per_k[0].classes == 1);
  CHECK(rep.per_k[1].classes == 2);  // walk counts: ends vs middle
  CHECK(rep.per_k[2].classes == 3);  // {0,4}, {1,3}, {2}
  REQUIRE(rep.sizes.has_value());
  CHECK(*rep.sizes == std::vector<long long>{2, 2, 1});
}

TEST_CASE("augmented-feature classes are invariant under relabeling") {
  Rng rng(91);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 5 + static_cast<int>(rng.below(4));
    Graph g = test_util::random_graph(n, 0.45, rng);
    NodeFeatures f(n, test_util::random_labels(n, 2, rng));
    std::vector<int> perm = test_util::random_permutation(n, rng);
    GraphCollection c;
    c.add("a", g, f);
    c.add("b", g.permuted(perm), f.permuted(perm));
    OperatorFamily fam = OperatorFamily::parse("I,D,A^1..A^3,dist(2)");
    EquivalenceReport rep = gamlp_graph_classes(c, fam, KeyMode::ExactFeatures,
                                                Tower::ExactInteger);
    for (const auto& row : rep.per_k) CHECK(row.classes == 1);
  }
}

TEST_CASE("one refinement round beyond the max power refines adjacency-power features") {
  Rng rng(92);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 5 + static_cast<int>(rng.below(4));
    Graph g = test_util::random_graph(n, 0.4, rng);
    NodeFeatures f(n, test_util::random_labels(n, 2, rng));
    const int K = 3;
    OperatorFamily fam = OperatorFamily::parse("I,A^1..A^" + std::to_string(K));
    FeatureMatrix<BigInt> fm = augment<BigInt>(g, f, fam);
    GraphCollection c;
    c.add("g", g, f);
    CollectionRefinement ref = refine_collection(c, K + 1);
    const std::vector<int>& colors = ref.per_graph[0].colors[K + 1];
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (colors[u] != colors[v]) continue;
        for (int col = 0; col < fm.values.cols(); ++col) {
          CHECK(fm.values(u, col) == fm.values(v, col));
        }
      }
    }
  }
}

TEST_CASE("fingerprint keys refine float feature classes on normalized families") {
  GraphCollection c = cycle_vs_cube();
  OperatorFamily fam = OperatorFamily::parse("N(1/2,1/2)^1..3");
  EquivalenceReport by_float = gamlp_graph_classes(c, fam, KeyMode::ExactFeatures, Tower::Float);
  EquivalenceReport by_fp = gamlp_graph_classes(c, fam, KeyMode::WalkFingerprint, Tower::Float);
  // Float rows are the constant 1 on both graphs; walk types still see the
  // degrees.
  CHECK(by_float.per_k.back().classes == 1);
  CHECK(by_fp.per_k.back().classes == 2);
  CHECK(by_fp.per_k.front().classes == 1);
}

TEST_CASE("degree-pair keys count classes in one shot") {
  Graph p4 = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
  GraphCollection c;
  c.add("p4", p4);
  OperatorFamily fam = OperatorFamily::parse("A^1");
  EquivalenceReport rep = gamlp_node_classes(c, fam, KeyMode::DegreePairMultiset,
                                             Tower::ExactInteger);
  REQUIRE(rep.per_k.size() == 1);
  CHECK(rep.per_k[0].k == 1);
  CHECK(rep.per_k[0].classes == 2);
}

TEST_CASE("degree profile identifiers are relabeling-invariant") {
  Rng rng(93);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 6 + static_cast<int>(rng.below(5));
    Graph g = test_util::random_graph(n, 0.5, rng);
    Graph pg = g.permuted(test_util::random_permutation(n, rng));
    CHECK(babai_identifier(g) == babai_identifier(pg));
    CHECK(degree_pair_fingerprint(g) == degree_pair_fingerprint(pg));
  }
}

TEST_CASE("degree profile identifier separates star from path") {
  Graph star = Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}});
  Graph path = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(babai_identifier(star) != babai_identifier(path));
}

TEST_CASE("degree pairs determine the degree profile identifier") {
  Rng rng(94);
  std::map<std::string, std::string> seen;
  for (int trial = 0; trial < 200; ++trial) {
    Graph g = test_util::random_graph(8, 0.5, rng);
    std::string pair_key = degree_pair_fingerprint(g);
    std::string babai = babai_identifier(g);
    auto [it, inserted] = seen.try_emplace(pair_key, babai);
    if (!inserted) CHECK(it->second == babai);
  }
}

TEST_CASE("alpha threshold values") {
  CHECK(alpha_threshold(2) == doctest::Approx(1.0));
  CHECK(alpha_threshold(30) == doctest::Approx(100.317).epsilon(1e-3));
  CHECK(alpha_threshold(10) < alpha_threshold(11));
  CHECK_THROWS_AS(alpha_threshold(1), ValidationError);
}

TEST_CASE("degree power sums") {
  CHECK(degree_power_sum({1, 2}, 1.0) == doctest::Approx(1.5));
  CHECK(degree_power_sum({2, 2, 2}, 0.0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(degree_power_sum({0}, 1.0), ValidationError);
}

TEST_CASE("exact normalized features on a 3-path") {
  Graph p3 = Graph::from_edges(3, {{0, 1}, {1, 2}});
  NodeFeatures f = NodeFeatures::uniform(3);
  auto feats = exact_normalized_features(p3, f, BigRat(1, 2), BigRat(1, 2), 1);
  REQUIRE(feats.size() == 3);
  REQUIRE(feats[0].size() == 1);
  // end node: one walk to the degree-2 middle: sqrt(1/2) = (1/2) sqrt(2)
  SurdValue expect_end;
  expect_end[2] = BigRat(1, 2);
  CHECK(feats[0][0] == expect_end);
  CHECK(feats[2][0] == expect_end);
  // middle node: two walks to degree-1 ends: 2 sqrt(1/2) = sqrt(2)
  SurdValue expect_mid;
  expect_mid[2] = BigRat(1);
  CHECK(feats[1][0] == expect_mid);
  CHECK(surd_to_string(expect_end) == "1/2*sqrt(2)");

  CHECK_THROWS_AS(exact_normalized_features(p3, f, BigRat(1, 3), BigRat(0), 1), ValidationError);
}

TEST_CASE("exact normalized features are the constant 1 on regular graphs") {
  GraphCollection pair = cycle_vs_cube();
  for (const auto& entry : pair.entries()) {
    auto feats =
        exact_normalized_features(entry.graph, entry.features, BigRat(1, 2), BigRat(1, 2), 4);
    SurdValue unit;
    unit[1] = 1;
    for (const auto& row : feats) {
      for (const auto& cell : row) CHECK(cell == unit);
    }
  }
}

TEST_CASE("exact surd features agree with float evaluation") {
  Rng rng(95);
  for (int trial = 0; trial < 5; ++trial) {
    int n = 6;
    Graph g = test_util::random_graph(n, 0.5, rng);
    NodeFeatures f(n, test_util::random_labels(n, 2, rng));
    auto feats = exact_normalized_features(g, f, BigRat(1, 2), BigRat(1, 2), 3);
    OperatorFamily fam = OperatorFamily::parse("N(1/2,1/2)^1..3");
    FeatureMatrix<double> fm = augment<double>(g, f, fam);
    for (int i = 0; i < n; ++i) {
      for (size_t c = 0; c < feats[i].size(); ++c) {
        double exact = 0.0;
        for (const auto& [s, coeff] : feats[i][c]) {
          exact += static_cast<double>(coeff) * std::sqrt(static_cast<double>(s));
        }
        CHECK(fm.values(i, static_cast<int>(c)) == doctest::Approx(exact).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("ridge recovers an exact linear rule") {
  Eigen::MatrixXd x(4, 1);
  Eigen::VectorXd y(4);
  for (int i = 0; i < 4; ++i) {
    x(i, 0) = i;
    y(i) = 2.0 * i + 1.0;
  }
  RidgeModel model = fit_ridge(x, y, 0.0);
  CHECK(model.weights(0) == doctest::Approx(2.0));
  CHECK(model.bias == doctest::Approx(1.0));
  CHECK(model.train_nmse == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("ridge rejects singular systems at lambda zero but not above") {
  Eigen::MatrixXd x(3, 2);
  Eigen::VectorXd y(3);
  for (int i = 0; i < 3; ++i) {
    x(i, 0) = i;
    x(i, 1) = i;  // duplicate column
    y(i) = i;
  }
  CHECK_THROWS_AS(fit_ridge(x, y, 0.0), ValidationError);
  RidgeModel model = fit_ridge(x, y, 1e-8);
  CHECK(model.train_nmse < 1e-6);
  CHECK_THROWS_AS(fit_ridge(x, y, -1.0), ValidationError);
}

TEST_CASE("wider operator families never hurt ridge training error") {
  Rng rng(96);
  Graph g = test_util::random_graph(30, 0.2, rng);
  NodeFeatures f = NodeFeatures::uniform(30);
  Eigen::VectorXd y(30);
  for (int i = 0; i < 30; ++i) y(i) = static_cast<double>(g.degree(i)) + 0.1 * (i % 3);
  auto nmse_for = [&](const std::string& omega) {
    FeatureMatrix<double> fm = augment<double>(g, f, OperatorFamily::parse(omega));
    Eigen::MatrixXd x(30, fm.values.cols());
    for (int i = 0; i < 30; ++i) {
      for (int j = 0; j < fm.values.cols(); ++j) x(i, j) = fm.values(i, j);
    }
    return fit_ridge(x, y, 1e-10).train_nmse;
  };
  double narrow = nmse_for("I,A^1");
  double wide = nmse_for("I,A^1..A^4");
  CHECK(wide <= narrow + 1e-9);
}

TEST_CASE("normalized mse handles constant labels") {
  Eigen::VectorXd y(3), pred(3);
  y << 2, 2, 2;
  pred << 2, 2, 2;
  CHECK(normalized_mse(pred, y) == 0.0);
  pred << 2, 2, 3;
  CHECK(std::isinf(normalized_mse(pred, y)));
}

TEST_CASE("logistic readout separates linearly separable labels") {
  Eigen::MatrixXd x(6, 1);
  std::vector<int> y;
  for (int i = 0; i < 6; ++i) {
    x(i, 0) = i < 3 ? -2.0 + 0.1 * i : 2.0 + 0.1 * i;
    y.push_back(i < 3 ? -1 : 1);
  }
  LogisticConfig cfg;
  LogisticModel model = fit_logistic(x, y, cfg);
  CHECK(model.train_accuracy == doctest::Approx(1.0));
  CHECK(model.predict(x) == y);

  std::vector<int> bad = {0, 1, 1, 1, 1, 1};
  CHECK_THROWS_AS(fit_logistic(x, bad, cfg), ValidationError);
}
