#include "igpool/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "igpool/io.hpp"

namespace igpool {

PoolingConfig TrainConfig::pooling_config() const {
  PoolingConfig pool;
  pool.k = k;
  pool.s = s;
  pool.ratio = ratio;
  pool.mode = mode;
  pool.weighted = weighted;
  return pool;
}

NetConfig TrainConfig::net_config() const {
  NetConfig net;
  net.depth = depth;
  net.readout = readout;
  net.pool = pooling_config();
  net.dropout = dropout;
  return net;
}

std::vector<std::string> grid_violations(const TrainConfig& config) {
  std::vector<std::string> violations;
  auto in = [](double value, std::initializer_list<double> grid) {
    return std::any_of(grid.begin(), grid.end(),
                       [value](double g) { return g == value; });
  };
  if (!in(config.learning_rate, {1e-2, 1e-3, 1e-4}))
    violations.push_back("learning_rate must be one of {0.01, 0.001, 0.0001}");
  if (!in(config.weight_decay, {0.0, 3e-5, 1e-4}))
    violations.push_back("weight_decay must be one of {0, 3e-5, 1e-4}");
  if (!in(config.dropout, {0.0, 0.5}))
    violations.push_back("dropout must be one of {0, 0.5}");
  if (config.hidden != 30 && config.hidden != 64)
    violations.push_back("hidden must be 30 or 64");
  return violations;
}

std::vector<std::string> hard_violations(const TrainConfig& config) {
  std::vector<std::string> violations;
  if (!(config.learning_rate > 0.0))
    violations.push_back("learning_rate must be > 0");
  if (config.weight_decay < 0.0)
    violations.push_back("weight_decay must be >= 0");
  if (!(config.dropout >= 0.0 && config.dropout < 1.0))
    violations.push_back("dropout must be in [0, 1)");
  if (config.batch_size < 1) violations.push_back("batch_size must be >= 1");
  if (config.epochs < 1) violations.push_back("epochs must be >= 1");
  if (config.folds < 2) violations.push_back("folds must be >= 2");
  if (!(config.ratio > 0.0 && config.ratio <= 1.0))
    violations.push_back("ratio must be in (0, 1]");
  if (config.s != 1 && config.s != 2) violations.push_back("s must be 1 or 2");
  if (config.k < 1) violations.push_back("k must be >= 1");
  if (config.hidden < 1) violations.push_back("hidden must be >= 1");
  return violations;
}

std::vector<int> stratified_folds(const Dataset& dataset, int folds,
                                  std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("stratified_folds: folds must be >= 2");
  if (dataset.num_classes < 1)
    throw std::invalid_argument("stratified_folds: dataset has no classes");
  if (dataset.graphs.size() < static_cast<std::size_t>(folds))
    throw std::invalid_argument(
        "stratified_folds: only " + std::to_string(dataset.graphs.size()) +
        " graphs for " + std::to_string(folds) + " folds");

  std::vector<std::vector<std::size_t>> by_class(
      static_cast<std::size_t>(dataset.num_classes));
  for (std::size_t i = 0; i < dataset.graphs.size(); ++i) {
    const int label = dataset.graphs[i].label;
    if (label < 0 || label >= dataset.num_classes)
      throw std::invalid_argument("stratified_folds: graph without valid label");
    by_class[static_cast<std::size_t>(label)].push_back(i);
  }

  // A rolling cursor deals each class's shuffled members round-robin and
  // carries on into the next class, so every fold receives a test graph
  // even when classes are smaller than the fold count and per-fold class
  // counts stay within one of a proportional split.
  Rng rng(mix_seed(seed, 0xF01D5));
  std::vector<int> fold_of(dataset.graphs.size(), 0);
  std::size_t cursor = 0;
  for (auto& members : by_class) {
    shuffle(members, rng);
    for (const std::size_t member : members)
      fold_of[member] = static_cast<int>(cursor++ % static_cast<std::size_t>(folds));
  }
  return fold_of;
}

AdamOptimizer::AdamOptimizer(double learning_rate, double beta1, double beta2,
                             double epsilon)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {}

void AdamOptimizer::step(ModelParams& params, const Gradients& grads) {
  auto param_views = parameter_views(params);
  auto grad_views = gradient_views(grads);
  if (param_views.size() != grad_views.size())
    throw std::invalid_argument("adam: gradient layout mismatch");

  if (m_.empty()) {
    for (const auto& view : param_views) {
      m_.push_back(VecX::Zero(view.size()));
      v_.push_back(VecX::Zero(view.size()));
    }
  }
  ++t_;
  const double correction1 = 1.0 - std::pow(beta1_, t_);
  const double correction2 = 1.0 - std::pow(beta2_, t_);
  for (std::size_t i = 0; i < param_views.size(); ++i) {
    if (param_views[i].size() != grad_views[i].size())
      throw std::invalid_argument("adam: tensor shape mismatch");
    auto m = m_[i].array();
    auto v = v_[i].array();
    m = beta1_ * m + (1.0 - beta1_) * grad_views[i];
    v = beta2_ * v + (1.0 - beta2_) * grad_views[i].square();
    param_views[i] -=
        lr_ * (m / correction1) / ((v / correction2).sqrt() + eps_);
  }
}

double evaluate_accuracy(const std::vector<const Graph*>& graphs,
                         const ModelParams& params, const NetConfig& config) {
  if (graphs.empty()) return 0.0;
  int correct = 0;
  for (const Graph* graph : graphs) {
    const ForwardTrace trace = forward(*graph, params, config);
    Index predicted = 0;
    trace.probs.maxCoeff(&predicted);
    if (static_cast<int>(predicted) == graph->label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(graphs.size());
}

CvResult cross_validate(const Dataset& dataset, const TrainConfig& config) {
  const auto hard = hard_violations(config);
  if (!hard.empty()) {
    std::string joined;
    for (const auto& v : hard) joined += (joined.empty() ? "" : "; ") + v;
    throw std::invalid_argument("cross_validate: " + joined);
  }
  for (const auto& g : dataset.graphs)
    if (!g.has_label())
      throw std::invalid_argument("cross_validate: dataset has unlabeled graphs");

  const std::vector<int> fold_of =
      stratified_folds(dataset, config.folds, config.seed);
  const NetConfig net = config.net_config();

  CvResult result;
  const auto t_start = std::chrono::steady_clock::now();
  for (int fold = 0; fold < config.folds; ++fold) {
    std::vector<std::size_t> train_ids;
    std::vector<const Graph*> test_graphs;
    for (std::size_t i = 0; i < dataset.graphs.size(); ++i) {
      if (fold_of[i] == fold)
        test_graphs.push_back(&dataset.graphs[i]);
      else
        train_ids.push_back(i);
    }

    const std::uint64_t fold_seed = mix_seed(config.seed, 1000 + fold);
    ModelParams params =
        init_params(dataset.feature_dim(), config.hidden, dataset.num_classes,
                    config.depth, mix_seed(fold_seed, 1));
    AdamOptimizer adam(config.learning_rate);
    Rng shuffle_rng(mix_seed(fold_seed, 2));
    Rng dropout_rng(mix_seed(fold_seed, 3));

    double last_test_acc = 0.0;
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
      const auto t_epoch = std::chrono::steady_clock::now();
      shuffle(train_ids, shuffle_rng);

      double loss_sum = 0.0;
      int correct = 0;
      for (std::size_t begin = 0; begin < train_ids.size();
           begin += static_cast<std::size_t>(config.batch_size)) {
        const std::size_t end =
            std::min(train_ids.size(),
                     begin + static_cast<std::size_t>(config.batch_size));
        std::vector<const Graph*> batch;
        batch.reserve(end - begin);
        for (std::size_t i = begin; i < end; ++i)
          batch.push_back(&dataset.graphs[train_ids[i]]);
        const LossResult batch_result =
            loss_and_gradients(batch, params, net, config.weight_decay,
                               /*training=*/true, &dropout_rng);
        adam.step(params, batch_result.grads);
        loss_sum += batch_result.loss * static_cast<double>(batch.size());
        correct += batch_result.correct;
      }

      EpochRow row;
      row.fold = fold;
      row.epoch = epoch;
      row.train_loss = loss_sum / static_cast<double>(train_ids.size());
      row.train_acc =
          static_cast<double>(correct) / static_cast<double>(train_ids.size());
      row.test_acc = evaluate_accuracy(test_graphs, params, net);
      row.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                        t_epoch)
              .count();
      last_test_acc = row.test_acc;
      result.rows.push_back(row);
    }
    result.fold_accuracy.push_back(last_test_acc);
    result.fold_params.push_back(std::move(params));
  }

  const double n = static_cast<double>(result.fold_accuracy.size());
  const double mean =
      std::accumulate(result.fold_accuracy.begin(), result.fold_accuracy.end(),
                      0.0) /
      n;
  double var = 0.0;
  for (double acc : result.fold_accuracy) var += (acc - mean) * (acc - mean);
  result.mean_accuracy = mean;
  result.std_accuracy = std::sqrt(var / n);
  result.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return result;
}

namespace {

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return buffer;
}

}  // namespace

void emit_metrics(const CvResult& result, const std::string& path) {
  std::string csv = "fold,epoch,train_loss,train_acc,test_acc,wall_seconds\n";
  for (const auto& row : result.rows) {
    csv += std::to_string(row.fold) + "," + std::to_string(row.epoch) + "," +
           format_double(row.train_loss) + "," + format_double(row.train_acc) +
           "," + format_double(row.test_acc) + "," +
           format_double(row.wall_seconds) + "\n";
  }
  csv += "summary,mean=" + format_double(result.mean_accuracy) +
         ",std=" + format_double(result.std_accuracy) +
         ",folds=" + std::to_string(result.fold_accuracy.size()) +
         ",rows=" + std::to_string(result.rows.size()) +
         ",total_seconds=" + format_double(result.total_seconds) + "\n";
  write_text_atomic(path, csv);
}

bool parse_depth(const std::string& text, Depth& out) {
  std::string t;
  for (char c : text) t += static_cast<char>(std::tolower(c));
  if (t == "plain-1" || t == "base-0") out = Depth::Plain1;
  else if (t == "plain-2" || t == "base-1") out = Depth::Plain2;
  else if (t == "plain-3" || t == "base-2") out = Depth::Plain3;
  else if (t == "pooled-2") out = Depth::Pooled2;
  else if (t == "pooled-3") out = Depth::Pooled3;
  else return false;
  return true;
}

bool parse_readout(const std::string& text, ReadoutMode& out) {
  std::string t;
  for (char c : text) t += static_cast<char>(std::tolower(c));
  if (t == "sum") out = ReadoutMode::Sum;
  else if (t == "mean") out = ReadoutMode::Mean;
  else return false;
  return true;
}

bool parse_pooling_mode(const std::string& text, PoolingMode& out) {
  std::string t;
  for (char c : text) t += static_cast<char>(std::tolower(c));
  if (t == "global") out = PoolingMode::Global;
  else if (t == "local") out = PoolingMode::Local;
  else return false;
  return true;
}

void apply_config_file(TrainConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open config file");
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    auto trimmed = [&](const std::string& s) {
      const auto b = s.find_first_not_of(" \t\r\n");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r\n");
      return s.substr(b, e - b + 1);
    };
    const std::string stripped = trimmed(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ParseError(path, line_no, "expected key = value");
    const std::string key = trimmed(stripped.substr(0, eq));
    const std::string value = trimmed(stripped.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ParseError(path, line_no, "expected key = value");

    try {
      if (key == "learning_rate") config.learning_rate = std::stod(value);
      else if (key == "weight_decay") config.weight_decay = std::stod(value);
      else if (key == "dropout") config.dropout = std::stod(value);
      else if (key == "batch_size") config.batch_size = std::stoi(value);
      else if (key == "epochs") config.epochs = std::stoi(value);
      else if (key == "folds") config.folds = std::stoi(value);
      else if (key == "ratio") config.ratio = std::stod(value);
      else if (key == "s") config.s = std::stoi(value);
      else if (key == "k") config.k = std::stoi(value);
      else if (key == "hidden") config.hidden = std::stoi(value);
      else if (key == "seed") config.seed = std::stoull(value);
      else if (key == "weighted") {
        if (value == "true" || value == "1") config.weighted = true;
        else if (value == "false" || value == "0") config.weighted = false;
        else throw ParseError(path, line_no, "weighted must be true or false");
      } else if (key == "mode") {
        if (!parse_pooling_mode(value, config.mode))
          throw ParseError(path, line_no, "mode must be global or local");
      } else if (key == "depth") {
        if (!parse_depth(value, config.depth))
          throw ParseError(path, line_no,
                           "depth must be plain-1|plain-2|plain-3|pooled-2|pooled-3");
      } else if (key == "readout") {
        if (!parse_readout(value, config.readout))
          throw ParseError(path, line_no, "readout must be sum or mean");
      } else {
        throw ParseError(path, line_no, "unknown key '" + key + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError(path, line_no, "cannot parse value '" + value + "'");
    }
  }
}

}  // namespace igpool
