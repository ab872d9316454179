#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "egonet/constructions.hpp"
#include "egonet/errors.hpp"
#include "egonet/gamlp.hpp"
#include "egonet/graph.hpp"
#include "egonet/operators.hpp"
#include "egonet/report.hpp"
#include "egonet/rng.hpp"
#include "egonet/sbm.hpp"
#include "egonet/walks.hpp"
#include "egonet/wl.hpp"

using nlohmann::ordered_json;

namespace {

struct GlobalOptions {
  std::string output;
  uint64_t seed = 1;
  int threads = 1;
  std::string tower = "auto";
  bool features_removed = false;
};

void emit_json(const ordered_json& j, const std::string& output) {
  std::string text = j.dump(2) + "\n";
  if (output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output);
  if (!out) throw egonet::ValidationError("cannot write " + output);
  out << text;
}

void emit_report(const egonet::EquivalenceReport& rep, const std::string& output) {
  if (output.empty()) {
    std::cout << rep.to_json() ;
  } else {
    egonet::write_report(rep, output);
  }
}

egonet::GraphCollection load_collection(const std::vector<std::string>& graph_files,
                                        const std::vector<std::string>& feature_files,
                                        bool features_removed) {
  if (graph_files.empty()) throw egonet::ValidationError("no input graphs given");
  if (!feature_files.empty() && feature_files.size() != graph_files.size()) {
    throw egonet::ValidationError("need one feature file per graph (or none)");
  }
  egonet::GraphCollection c;
  for (size_t i = 0; i < graph_files.size(); ++i) {
    egonet::Graph g = egonet::load_edge_list_file(graph_files[i]);
    std::string name = std::to_string(i) + ":" + graph_files[i];
    if (!feature_files.empty() && !features_removed) {
      egonet::NodeFeatures f =
          egonet::NodeFeatures::load_file(feature_files[i], g.num_nodes());
      c.add(name, std::move(g), std::move(f));
    } else {
      c.add(name, std::move(g));
    }
  }
  return c;
}

egonet::Tower resolve_tower(const std::string& name, const egonet::OperatorFamily& fam) {
  if (name == "auto") return fam.auto_tower();
  if (name == "int") return egonet::Tower::ExactInteger;
  if (name == "rational") return egonet::Tower::ExactRational;
  if (name == "float") return egonet::Tower::Float;
  throw egonet::ValidationError("unknown tower: " + name);
}

// --- wl-classes -------------------------------------------------------------

int run_wl_classes(const GlobalOptions& g, const std::vector<std::string>& inputs,
                   const std::vector<std::string>& features, int iterations,
                   const std::string& scope, bool sizes) {
  egonet::GraphCollection c = load_collection(inputs, features, g.features_removed);
  egonet::EquivalenceReport rep =
      scope == "graph" ? egonet::count_graph_classes(c, iterations, sizes)
                       : egonet::count_node_classes(c, iterations, sizes);
  emit_report(rep, g.output);
  return 0;
}

// --- gamlp-classes ----------------------------------------------------------

int run_gamlp_classes(const GlobalOptions& g, const std::vector<std::string>& inputs,
                      const std::vector<std::string>& features, const std::string& omega,
                      const std::string& mode_name, const std::string& scope, bool sizes) {
  egonet::GraphCollection c = load_collection(inputs, features, g.features_removed);
  egonet::OperatorFamily fam = egonet::OperatorFamily::parse(omega);
  egonet::KeyMode mode;
  if (mode_name == "exact") {
    mode = egonet::KeyMode::ExactFeatures;
  } else if (mode_name == "fingerprint") {
    mode = egonet::KeyMode::WalkFingerprint;
  } else if (mode_name == "degree-pair") {
    mode = egonet::KeyMode::DegreePairMultiset;
  } else {
    throw egonet::ValidationError("unknown mode: " + mode_name);
  }
  egonet::Tower tower = resolve_tower(g.tower, fam);
  egonet::EquivalenceReport rep =
      scope == "graph" ? egonet::gamlp_graph_classes(c, fam, mode, tower, sizes)
                       : egonet::gamlp_node_classes(c, fam, mode, tower, sizes);
  emit_report(rep, g.output);
  return 0;
}

// --- verify -----------------------------------------------------------------

int run_verify(const GlobalOptions& g, const std::string& which) {
  std::vector<std::string> names =
      which.empty() ? egonet::construction_names() : std::vector<std::string>{which};
  ordered_json out = ordered_json::array();
  bool all_pass = true;
  for (const auto& name : names) {
    ordered_json entry;
    entry["construction"] = name;
    entry["checks"] = ordered_json::array();
    for (const auto& check : egonet::verify_construction(name)) {
      entry["checks"].push_back(
          {{"check", check.check}, {"pass", check.pass}, {"detail", check.detail}});
      std::cout << (check.pass ? "[PASS] " : "[FAIL] ") << name << "/" << check.check << ": "
                << check.detail << "\n";
      if (!check.pass) all_pass = false;
    }
    out.push_back(entry);
  }
  if (!g.output.empty()) emit_json(out, g.output);
  return all_pass ? 0 : 1;
}

// --- enumerate --------------------------------------------------------------

int run_enumerate(const GlobalOptions& g, const std::string& variant, int m, int K,
                  const std::vector<int>& zeros, long long budget, bool list_trees) {
  egonet::EnumerationResult res;
  if (variant == "agg") {
    if (!zeros.empty()) throw egonet::ValidationError("--zeros only applies to --variant full");
    res = egonet::enumerate_agg_trees(m, K, budget);
  } else if (variant == "full") {
    egonet::TreeSpec spec;
    spec.m = m;
    spec.K = K;
    if (!zeros.empty()) spec.level_zero_counts = zeros;
    res = egonet::enumerate_full_mary(spec, budget);
  } else {
    throw egonet::ValidationError("unknown variant: " + variant);
  }
  ordered_json out;
  out["variant"] = variant;
  out["m"] = m;
  out["K"] = K;
  if (!zeros.empty()) out["level_zero_counts"] = zeros;
  out["count"] = res.count;
  if (variant == "agg") {
    out["lower_bound"] = res.lower_bound.str();
    out["bound_satisfied"] = res.bound_satisfied;
  }
  if (list_trees) {
    ordered_json trees = ordered_json::array();
    for (auto& t : res.trees) trees.push_back(t.serialize());
    out["trees"] = trees;
  }
  emit_json(out, g.output);
  return 0;
}

// --- sbm --------------------------------------------------------------------

int run_sbm(const GlobalOptions& g, int n, double a, double b, int seeds, bool spectral,
            const std::string& omega, double kappa, double train_frac, bool no_normalize,
            int epochs, double lr) {
  ordered_json out;
  out["n"] = n;
  out["a"] = a;
  out["b"] = b;
  out["snr"] = egonet::sbm_snr(a, b);
  out["seeds"] = seeds;
  if (!spectral && omega.empty()) {
    throw egonet::ValidationError("pick --spectral and/or --gamlp <family>");
  }
  if (spectral) {
    egonet::SbmPreset preset{"custom", a, b};
    egonet::SweepPoint point =
        egonet::spectral_sweep_point(preset, n, seeds, g.threads, g.seed);
    ordered_json sj;
    sj["kappa"] = kappa;
    sj["mean_overlap"] = point.mean_overlap;
    sj["per_seed"] = point.per_seed;
    out["spectral"] = sj;
  }
  if (!omega.empty()) {
    egonet::OperatorFamily fam = egonet::OperatorFamily::parse(omega);
    egonet::LogisticConfig cfg;
    cfg.epochs = epochs;
    cfg.lr = lr;
    std::vector<double> train_ov, test_ov;
    for (int s = 0; s < seeds; ++s) {
      egonet::SbmInstance inst =
          egonet::generate_sbm({n, a, b, g.seed + static_cast<uint64_t>(s)});
      egonet::CommunityFitResult fit = egonet::gamlp_community(
          inst, fam, cfg, train_frac, !no_normalize, g.seed + 7000 + static_cast<uint64_t>(s));
      train_ov.push_back(fit.train_overlap);
      test_ov.push_back(fit.test_overlap);
    }
    double mean_test = 0, mean_train = 0;
    for (int s = 0; s < seeds; ++s) {
      mean_test += test_ov[s];
      mean_train += train_ov[s];
    }
    ordered_json gj;
    gj["omega"] = fam.to_string();
    gj["train_frac"] = train_frac;
    gj["normalize"] = !no_normalize;
    gj["mean_train_overlap"] = mean_train / seeds;
    gj["mean_test_overlap"] = mean_test / seeds;
    gj["per_seed_test"] = test_ov;
    out["gamlp"] = gj;
  }
  emit_json(out, g.output);
  return 0;
}

// --- fit-walk-task ----------------------------------------------------------

int run_fit_walk_task(const GlobalOptions& g, const std::string& input,
                      const std::vector<int>& rrg, int length, long long train_count,
                      double lambda, const std::string& dump_walks) {
  egonet::Graph graph;
  if (!input.empty()) {
    graph = egonet::load_edge_list_file(input);
  } else if (rrg.size() == 2) {
    graph = egonet::random_regular_graph(rrg[0], rrg[1], g.seed);
  } else {
    throw egonet::ValidationError("give --input FILE or --rrg N D");
  }
  int n = graph.num_nodes();
  if (train_count < 1 || train_count >= n) {
    throw egonet::ValidationError("--train must leave both split sides non-empty");
  }

  // Feature 1 ("blue") on even-index nodes; the target counts length-L walks
  // whose every step lands on a blue node.
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = i % 2 == 0 ? 1 : 0;
  egonet::NodeFeatures f(n, labels);
  std::vector<int> tuple(length, 1);

  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) {
    y[i] = static_cast<double>(egonet::count_attributed(egonet::rooted(graph, i), f, tuple));
  }

  if (!dump_walks.empty()) {
    std::ofstream out(dump_walks);
    if (!out) throw egonet::ValidationError("cannot write " + dump_walks);
    std::string tuple_str(length, '1');
    out << "root,tuple,count\n";
    for (int i = 0; i < n; ++i) {
      out << i << "," << tuple_str << "," << static_cast<long long>(y[i]) << "\n";
    }
  }

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  egonet::Rng rng(g.seed + 99);
  rng.shuffle(order);

  auto split_stats = [&](const std::vector<double>& pred) {
    double train_se = 0, test_se = 0;
    for (int t = 0; t < n; ++t) {
      double d = pred[order[t]] - y[order[t]];
      (t < train_count ? train_se : test_se) += d * d;
    }
    ordered_json j;
    j["train_mse"] = train_se / static_cast<double>(train_count);
    j["test_mse"] = test_se / static_cast<double>(n - train_count);
    return j;
  };

  ordered_json out;
  out["n"] = n;
  out["length"] = length;
  out["train"] = train_count;
  out["lambda"] = lambda;

  // Tabular read-out over refinement colors at depth = walk length.
  {
    egonet::ColorAssignment colors = egonet::refine(graph, f, length);
    const std::vector<int>& last = colors.colors[length];
    std::vector<int> train_colors;
    std::vector<double> train_y;
    double mean = 0;
    for (long long t = 0; t < train_count; ++t) {
      train_colors.push_back(last[order[t]]);
      train_y.push_back(y[order[t]]);
      mean += y[order[t]];
    }
    mean /= static_cast<double>(train_count);
    egonet::TabularPredictor tab = egonet::TabularPredictor::fit(train_colors, train_y, mean);
    std::vector<double> pred(n);
    for (int i = 0; i < n; ++i) pred[i] = tab.predict(last[i]);
    out["tabular"] = split_stats(pred);
  }

  // Ridge over augmented features, short and long operator ranges.
  auto ridge_block = [&](int max_power) {
    egonet::OperatorFamily fam =
        egonet::OperatorFamily::parse("I,A^1..A^" + std::to_string(max_power));
    egonet::FeatureMatrix<double> fm = egonet::augment<double>(graph, f, fam);
    int p = fm.values.cols();
    Eigen::MatrixXd x_train(train_count, p);
    Eigen::VectorXd y_train(train_count);
    for (long long t = 0; t < train_count; ++t) {
      for (int j = 0; j < p; ++j) x_train(t, j) = fm.values(order[t], j);
      y_train(t) = y[order[t]];
    }
    egonet::RidgeModel model = egonet::fit_ridge(x_train, y_train, lambda);
    std::vector<double> pred(n);
    for (int i = 0; i < n; ++i) {
      double z = model.bias;
      for (int j = 0; j < p; ++j) z += fm.values(i, j) * model.weights(j);
      pred[i] = z;
    }
    ordered_json j = split_stats(pred);
    j["omega"] = fam.to_string();
    j["train_nmse"] = model.train_nmse;
    return j;
  };
  out["ridge_short"] = ridge_block(length);
  out["ridge_long"] = ridge_block(2 * length);

  emit_json(out, g.output);
  return 0;
}

// --- babai ------------------------------------------------------------------

int run_babai(const GlobalOptions& g, const std::vector<std::string>& inputs) {
  ordered_json out = ordered_json::array();
  for (const auto& file : inputs) {
    egonet::Graph graph = egonet::load_edge_list_file(file);
    ordered_json entry;
    entry["input"] = file;
    entry["n"] = graph.num_nodes();
    entry["identifier"] = egonet::babai_identifier(graph);
    entry["degree_pair_fingerprint"] = egonet::degree_pair_fingerprint(graph);
    out.push_back(entry);
  }
  emit_json(out, g.output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Node and graph equivalence classes from message passing vs augmented features, "
               "exact walk counting, and spectral community detection"};
  app.require_subcommand(1);
  app.fallthrough();  // let the global options above also appear after the subcommand name

  GlobalOptions g;
  app.add_option("--output", g.output, "Write JSON here (reports also get a .csv sibling)");
  app.add_option("--seed", g.seed, "Base random seed");
  app.add_option("--threads", g.threads, "Worker threads for multi-seed sweeps");
  app.add_option("--tower", g.tower, "Number tower: auto, int, rational, float")
      ->check(CLI::IsMember({"auto", "int", "rational", "float"}));
  app.add_flag("--features-removed", g.features_removed,
               "Ignore feature files and use uniform features");

  // wl-classes
  auto* wl = app.add_subcommand("wl-classes", "Color-refinement equivalence classes");
  std::vector<std::string> wl_inputs, wl_features;
  int wl_k = 2;
  std::string wl_scope = "node";
  bool wl_sizes = false;
  wl->add_option("--input", wl_inputs, "Edge list files")->required()->expected(-1);
  wl->add_option("--features", wl_features, "Feature files, one per graph");
  wl->add_option("-K,--iterations", wl_k, "Refinement rounds")->required();
  wl->add_option("--scope", wl_scope, "node or graph")
      ->check(CLI::IsMember({"node", "graph"}));
  wl->add_flag("--sizes", wl_sizes, "Include class sizes");

  // gamlp-classes
  auto* ga = app.add_subcommand("gamlp-classes", "Augmented-feature equivalence classes");
  std::vector<std::string> ga_inputs, ga_features;
  std::string ga_omega, ga_mode = "exact", ga_scope = "node";
  bool ga_sizes = false;
  ga->add_option("--input", ga_inputs, "Edge list files")->required()->expected(-1);
  ga->add_option("--features", ga_features, "Feature files, one per graph");
  ga->add_option("--omega", ga_omega, "Operator family, e.g. \"I,A^1..A^3\"")->required();
  ga->add_option("--mode", ga_mode, "exact, fingerprint, or degree-pair")
      ->check(CLI::IsMember({"exact", "fingerprint", "degree-pair"}));
  ga->add_option("--scope", ga_scope, "node or graph")
      ->check(CLI::IsMember({"node", "graph"}));
  ga->add_flag("--sizes", ga_sizes, "Include class sizes");

  // verify
  auto* ve = app.add_subcommand("verify", "Check the built-in reference constructions");
  std::string ve_name;
  ve->add_option("--construction", ve_name, "Verify one construction (default: all)");

  // enumerate
  auto* en = app.add_subcommand("enumerate", "Exhaustively enumerate featured trees");
  std::string en_variant = "agg";
  int en_m = 2, en_k = 1;
  std::vector<int> en_zeros;
  long long en_budget = 10000000;
  bool en_list = false;
  en->add_option("--variant", en_variant, "agg (m-regular aggregation) or full (full m-ary)")
      ->check(CLI::IsMember({"agg", "full"}));
  en->add_option("-m", en_m, "Branching parameter")->required();
  en->add_option("-K", en_k, "Depth")->required();
  en->add_option("--zeros", en_zeros, "Per-level zero-feature counts (full variant)");
  en->add_option("--budget", en_budget, "Tree census budget");
  en->add_flag("--list", en_list, "Include canonical trees in the output");

  // sbm
  auto* sb = app.add_subcommand("sbm", "Two-block SBM community detection comparison");
  int sb_n = 1000, sb_seeds = 10, sb_epochs = 500;
  double sb_a = 5.5, sb_b = 0.5, sb_kappa = 8.0, sb_train = 0.5, sb_lr = 0.1;
  bool sb_spectral = false, sb_no_norm = false;
  std::string sb_omega;
  sb->add_option("--n", sb_n, "Nodes");
  sb->add_option("--a", sb_a, "Within-block degree parameter");
  sb->add_option("--b", sb_b, "Across-block degree parameter");
  sb->add_option("--seeds", sb_seeds, "Independent instances");
  sb->add_flag("--spectral", sb_spectral, "Run deformed-Laplacian spectral clustering");
  sb->add_option("--gamlp", sb_omega, "Operator family for the logistic readout");
  sb->add_option("--kappa", sb_kappa, "Spectral shift");
  sb->add_option("--train-frac", sb_train, "Training fraction for the readout");
  sb->add_flag("--no-normalize", sb_no_norm, "Skip per-column standardization");
  sb->add_option("--epochs", sb_epochs, "Logistic epochs");
  sb->add_option("--lr", sb_lr, "Logistic learning rate");

  // fit-walk-task
  auto* fw = app.add_subcommand("fit-walk-task",
                                "Predict attributed walk counts from refinement colors vs ridge "
                                "on augmented features");
  std::string fw_input, fw_dump;
  std::vector<int> fw_rrg;
  int fw_length = 4;
  long long fw_train = 300;
  double fw_lambda = 1e-6;
  fw->add_option("--input", fw_input, "Edge list file");
  fw->add_option("--rrg", fw_rrg, "Random regular graph: N D")->expected(2);
  fw->add_option("--length", fw_length, "Walk length")->required();
  fw->add_option("--train", fw_train, "Training node count");
  fw->add_option("--lambda", fw_lambda, "Ridge regularization");
  fw->add_option("--dump-walks", fw_dump, "Write per-root walk counts to this CSV");

  // babai
  auto* ba = app.add_subcommand("babai", "Degree-profile identifiers for graphs");
  std::vector<std::string> ba_inputs;
  ba->add_option("--input", ba_inputs, "Edge list files")->required()->expected(-1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (wl->parsed()) return run_wl_classes(g, wl_inputs, wl_features, wl_k, wl_scope, wl_sizes);
    if (ga->parsed()) {
      return run_gamlp_classes(g, ga_inputs, ga_features, ga_omega, ga_mode, ga_scope, ga_sizes);
    }
    if (ve->parsed()) return run_verify(g, ve_name);
    if (en->parsed()) {
      return run_enumerate(g, en_variant, en_m, en_k, en_zeros, en_budget, en_list);
    }
    if (sb->parsed()) {
      return run_sbm(g, sb_n, sb_a, sb_b, sb_seeds, sb_spectral, sb_omega, sb_kappa, sb_train,
                     sb_no_norm, sb_epochs, sb_lr);
    }
    if (fw->parsed()) {
      return run_fit_walk_task(g, fw_input, fw_rrg, fw_length, fw_train, fw_lambda, fw_dump);
    }
    if (ba->parsed()) return run_babai(g, ba_inputs);
  } catch (const egonet::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const egonet::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
