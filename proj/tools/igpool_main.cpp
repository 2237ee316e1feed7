#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "igpool/dataset.hpp"
#include "igpool/gnn.hpp"
#include "igpool/io.hpp"
#include "igpool/pooling.hpp"
#include "igpool/trainer.hpp"
#include "igpool/verify.hpp"

namespace {

namespace fs = std::filesystem;
using namespace igpool;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct PoolArgs {
  std::string input;
  std::string features;
  std::string out;
  int k = 1;
  int s = 1;
  double ratio = 0.5;
  std::string mode = "global";
  bool weighted = false;
};

int run_pool(const PoolArgs& args) {
  PoolingConfig config;
  config.k = args.k;
  config.s = args.s;
  config.ratio = args.ratio;
  config.weighted = args.weighted;
  if (!parse_pooling_mode(args.mode, config.mode)) {
    std::cerr << "error: --mode must be 'global' or 'local'\n";
    return kExitValidation;
  }
  validate(config);

  const MatX features = read_dense_matrix(args.features);
  const std::vector<Edge> edges = read_edge_list(args.input);
  for (const Edge& e : edges)
    if (e.u > features.rows() || e.v > features.rows())
      throw ParseError(args.input, 0,
                       "edge endpoint exceeds the feature row count (" +
                           std::to_string(features.rows()) + ")");
  const Graph graph =
      graph_from_edge_list(features.rows(), edges, /*base=*/1, features);

  const PoolingResult result = coarsen(graph, config);

  fs::create_directories(args.out);
  const fs::path out(args.out);
  write_text_atomic((out / "coarse_A.txt").string(),
                    format_edge_list(result.coarse.adjacency));
  write_text_atomic((out / "coarse_features.txt").string(),
                    format_dense_matrix(result.coarse.features));
  write_text_atomic((out / "selected.txt").string(),
                    format_index_list(result.selected));
  write_text_atomic((out / "gains.txt").string(), format_vector(result.gains));

  std::cout << "pooled " << graph.num_nodes() << " -> "
            << result.selected.size() << " nodes; outputs in " << args.out
            << "\n";
  return kExitOk;
}

struct TrainArgs {
  std::string dataset_dir;
  std::string name;
  std::string config_file;
  std::string out = ".";
  bool allow_any_hyper = false;
  bool no_checkpoints = false;

  std::optional<double> lr, weight_decay, dropout, ratio;
  std::optional<int> batch_size, epochs, folds, s, k, hidden;
  std::optional<std::string> mode, depth, readout;
  std::optional<std::uint64_t> seed;
  std::optional<bool> weighted;
};

TrainConfig resolve_config(const TrainArgs& args) {
  TrainConfig config;
  if (!args.config_file.empty()) apply_config_file(config, args.config_file);
  if (args.lr) config.learning_rate = *args.lr;
  if (args.weight_decay) config.weight_decay = *args.weight_decay;
  if (args.dropout) config.dropout = *args.dropout;
  if (args.ratio) config.ratio = *args.ratio;
  if (args.batch_size) config.batch_size = *args.batch_size;
  if (args.epochs) config.epochs = *args.epochs;
  if (args.folds) config.folds = *args.folds;
  if (args.s) config.s = *args.s;
  if (args.k) config.k = *args.k;
  if (args.hidden) config.hidden = *args.hidden;
  if (args.seed) config.seed = *args.seed;
  if (args.weighted) config.weighted = *args.weighted;
  if (args.mode && !parse_pooling_mode(*args.mode, config.mode))
    throw std::invalid_argument("--mode must be 'global' or 'local'");
  if (args.depth && !parse_depth(*args.depth, config.depth))
    throw std::invalid_argument(
        "--depth must be plain-1|plain-2|plain-3|pooled-2|pooled-3");
  if (args.readout && !parse_readout(*args.readout, config.readout))
    throw std::invalid_argument("--readout must be 'sum' or 'mean'");
  if (const char* env_seed = std::getenv("IGPOOL_SEED"))
    config.seed = std::stoull(env_seed);
  return config;
}

std::string dataset_name(const TrainArgs& args) {
  if (!args.name.empty()) return args.name;
  return fs::path(args.dataset_dir).filename().string();
}

int validate_train_config(const TrainConfig& config, bool allow_any_hyper) {
  std::vector<std::string> problems = hard_violations(config);
  if (!allow_any_hyper) {
    const auto grid = grid_violations(config);
    problems.insert(problems.end(), grid.begin(), grid.end());
  }
  if (!problems.empty()) {
    std::cerr << "configuration rejected:\n";
    for (const auto& p : problems) std::cerr << "  - " << p << "\n";
    if (!allow_any_hyper)
      std::cerr << "(pass --allow-any-hyper to lift the tuning-grid checks)\n";
    return kExitValidation;
  }
  return kExitOk;
}

int run_train(const TrainArgs& args) {
  const TrainConfig config = resolve_config(args);
  if (const int rc = validate_train_config(config, args.allow_any_hyper))
    return rc;

  const Dataset dataset = load_tu_dataset(args.dataset_dir, dataset_name(args));
  std::cout << "loaded " << dataset.name << ": " << dataset.graphs.size()
            << " graphs, " << dataset.num_classes << " classes, feature dim "
            << dataset.feature_dim() << "\n";

  const CvResult result = cross_validate(dataset, config);

  fs::create_directories(args.out);
  const fs::path out(args.out);
  emit_metrics(result, (out / "metrics.csv").string());
  if (!args.no_checkpoints) {
    const NetConfig net = config.net_config();
    for (std::size_t f = 0; f < result.fold_params.size(); ++f)
      save_checkpoint((out / ("fold_" + std::to_string(f) + ".ckpt")).string(),
                      result.fold_params[f], net);
  }

  std::cout.setf(std::ios::fixed);
  std::cout.precision(4);
  for (std::size_t f = 0; f < result.fold_accuracy.size(); ++f)
    std::cout << "fold " << f << ": test accuracy "
              << result.fold_accuracy[f] << "\n";
  std::cout << "mean accuracy " << result.mean_accuracy << " +/- "
            << result.std_accuracy << " over "
            << result.fold_accuracy.size() << " folds ("
            << result.total_seconds << " s)\n";
  std::cout << "metrics written to " << (out / "metrics.csv").string() << "\n";
  return kExitOk;
}

struct EvalArgs {
  std::string model;
  std::string dataset_dir;
  std::string name;
};

int run_eval(const EvalArgs& args) {
  auto [params, net] = load_checkpoint(args.model);
  const std::string name =
      args.name.empty() ? fs::path(args.dataset_dir).filename().string()
                        : args.name;
  const Dataset dataset = load_tu_dataset(args.dataset_dir, name);
  if (dataset.feature_dim() != params.input_dim())
    throw std::invalid_argument(
        "eval: dataset feature dim " + std::to_string(dataset.feature_dim()) +
        " does not match model input dim " +
        std::to_string(params.input_dim()));

  std::vector<const Graph*> graphs;
  graphs.reserve(dataset.graphs.size());
  for (const auto& g : dataset.graphs) graphs.push_back(&g);
  const double accuracy = evaluate_accuracy(graphs, params, net);
  std::cout << "accuracy " << accuracy << " over " << graphs.size()
            << " graphs\n";
  return kExitOk;
}

int run_inspect(const std::string& dir, const std::string& name_flag) {
  const std::string name =
      name_flag.empty() ? fs::path(dir).filename().string() : name_flag;
  const Dataset dataset = load_tu_dataset(dir, name);
  std::cout << "dataset " << dataset.name << "\n"
            << "  graphs:        " << dataset.graphs.size() << "\n"
            << "  classes:       " << dataset.num_classes << "\n"
            << "  feature dim:   " << dataset.feature_dim() << "\n"
            << "  avg |V|:       " << dataset.average_node_count() << "\n"
            << "  avg |E|:       " << dataset.average_edge_count() << "\n";
  const auto counts = dataset.class_counts();
  for (std::size_t c = 0; c < counts.size(); ++c)
    std::cout << "  class " << c << " count: " << counts[c] << "\n";
  const char* kind = "constant-one";
  if (dataset.feature_kind == FeatureKind::OneHotNodeLabels)
    kind = "one-hot node labels";
  else if (dataset.feature_kind == FeatureKind::ContinuousAttributes)
    kind = "continuous attributes";
  std::cout << "  features:      " << kind << "\n";
  return kExitOk;
}

int run_verify(const std::string& suite) {
  SuiteReport report;
  if (suite == "props") report = run_props_suite();
  else if (suite == "gradients") report = run_gradients_suite();
  else if (suite == "entropy") report = run_entropy_suite();
  else if (suite == "oracle") report = run_oracle_suite();
  else if (suite == "scaling") report = run_scaling_suite();
  else {
    std::cerr << "error: unknown suite '" << suite
              << "' (props|gradients|entropy|oracle|scaling)\n";
    return kExitValidation;
  }
  print_report(report, std::cout);
  return report.passed() ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"information-gain graph pooling and graph classification"};
  app.require_subcommand(1);

  PoolArgs pool_args;
  auto* pool = app.add_subcommand("pool", "coarsen a single graph");
  pool->add_option("--input", pool_args.input,
                   "edge list file (1-indexed 'u, v[, w]' lines)")
      ->required();
  pool->add_option("--features", pool_args.features,
                   "dense feature matrix, one whitespace-separated row per node")
      ->required();
  pool->add_option("--k", pool_args.k, "prediction hop count");
  pool->add_option("--s", pool_args.s, "adjacency expansion power (1 or 2)");
  pool->add_option("--ratio", pool_args.ratio, "kept-node fraction in (0, 1]");
  pool->add_option("--mode", pool_args.mode, "global or local");
  pool->add_flag("--weighted", pool_args.weighted,
                 "keep expanded edge weights instead of binarizing");
  pool->add_option("--out", pool_args.out, "output directory")->required();

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "k-fold cross-validated training");
  train->add_option("--dataset", train_args.dataset_dir, "dataset directory")
      ->required();
  train->add_option("--name", train_args.name,
                    "dataset name (default: directory basename)");
  train->add_option("--config", train_args.config_file,
                    "flat key=value config file");
  train->add_option("--out", train_args.out,
                    "output directory for metrics and checkpoints");
  train->add_flag("--allow-any-hyper", train_args.allow_any_hyper,
                  "accept hyperparameters outside the tuning grids");
  train->add_flag("--no-checkpoints", train_args.no_checkpoints,
                  "skip writing per-fold checkpoints");
  train->add_option("--lr", train_args.lr, "learning rate");
  train->add_option("--weight-decay", train_args.weight_decay, "weight decay");
  train->add_option("--dropout", train_args.dropout, "dropout ratio");
  train->add_option("--ratio", train_args.ratio, "pooling ratio");
  train->add_option("--batch-size", train_args.batch_size, "mini-batch size");
  train->add_option("--epochs", train_args.epochs, "training epochs");
  train->add_option("--folds", train_args.folds, "cross-validation folds");
  train->add_option("--s", train_args.s, "adjacency expansion power");
  train->add_option("--k", train_args.k, "prediction hop count");
  train->add_option("--hidden", train_args.hidden, "hidden width (30 or 64)");
  train->add_option("--mode", train_args.mode, "pooling mode: global or local");
  train->add_option("--depth", train_args.depth,
                    "plain-1|plain-2|plain-3|pooled-2|pooled-3");
  train->add_option("--readout", train_args.readout, "sum or mean");
  train->add_option("--seed", train_args.seed,
                    "master seed (IGPOOL_SEED overrides)");
  train->add_option("--weighted", train_args.weighted,
                    "treat edges as weighted in pooling");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint on a dataset");
  eval->add_option("--model", eval_args.model, "checkpoint file")->required();
  eval->add_option("--dataset", eval_args.dataset_dir, "dataset directory")
      ->required();
  eval->add_option("--name", eval_args.name, "dataset name");

  std::string inspect_dir, inspect_name;
  auto* inspect = app.add_subcommand("inspect", "print dataset statistics");
  inspect->add_option("--dataset", inspect_dir, "dataset directory")
      ->required();
  inspect->add_option("--name", inspect_name, "dataset name");

  std::string suite;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", suite,
                     "props|gradients|entropy|oracle|scaling")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitIo;
  }

  try {
    if (pool->parsed()) return run_pool(pool_args);
    if (train->parsed()) return run_train(train_args);
    if (eval->parsed()) return run_eval(eval_args);
    if (inspect->parsed()) return run_inspect(inspect_dir, inspect_name);
    if (verify->parsed()) return run_verify(suite);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
