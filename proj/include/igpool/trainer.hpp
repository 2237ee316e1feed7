#pragma once

#include <string>
#include <vector>

#include "igpool/dataset.hpp"
#include "igpool/gnn.hpp"

namespace igpool {

struct TrainConfig {
  double learning_rate = 1e-2;
  double weight_decay = 0.0;
  double dropout = 0.0;
  int batch_size = 20;
  int epochs = 100;
  int folds = 10;
  double ratio = 0.25;
  int s = 1;
  int k = 1;
  PoolingMode mode = PoolingMode::Global;
  bool weighted = false;
  Depth depth = Depth::Pooled2;
  int hidden = 30;
  ReadoutMode readout = ReadoutMode::Sum;
  std::uint64_t seed = 1;

  PoolingConfig pooling_config() const;
  NetConfig net_config() const;
};

/// Values outside the tuning grids the experiments draw from
/// (learning rate, weight decay, dropout, hidden width). Empty when clean;
/// callers may choose to ignore these.
std::vector<std::string> grid_violations(const TrainConfig& config);

/// Hard domain violations (ranges and counts). Never ignorable.
std::vector<std::string> hard_violations(const TrainConfig& config);

/// Seed-deterministic stratified fold id per graph. Requires at least
/// `folds` graphs of every class; per-fold class counts deviate from a
/// proportional split by at most one graph.
std::vector<int> stratified_folds(const Dataset& dataset, int folds,
                                  std::uint64_t seed);

struct EpochRow {
  int fold = 0;
  int epoch = 0;
  double train_loss = 0.0;
  double train_acc = 0.0;
  double test_acc = 0.0;
  double wall_seconds = 0.0;
};

struct CvResult {
  std::vector<EpochRow> rows;
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  double total_seconds = 0.0;
  std::vector<ModelParams> fold_params;
};

/// Adam with bias correction; moments laid out tensor-by-tensor in the
/// ModelParams order.
class AdamOptimizer {
 public:
  explicit AdamOptimizer(double learning_rate, double beta1 = 0.9,
                         double beta2 = 0.999, double epsilon = 1e-8);

  void step(ModelParams& params, const Gradients& grads);

 private:
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  std::vector<VecX> m_, v_;
};

double evaluate_accuracy(const std::vector<const Graph*>& graphs,
                         const ModelParams& params, const NetConfig& config);

/// Stratified k-fold cross-validation with seeded mini-batch Adam.
/// Deterministic given (dataset, config): fold assignment, initialization,
/// shuffling and dropout all derive from config.seed.
CvResult cross_validate(const Dataset& dataset, const TrainConfig& config);

/// Writes the per-epoch table plus one summary row as CSV
/// (fold,epoch,train_loss,train_acc,test_acc,wall_seconds). The file is
/// replaced atomically; never appended.
void emit_metrics(const CvResult& result, const std::string& path);

/// Applies a flat key=value config file ('#' comments allowed) on top of
/// the given config. Unknown keys or unparsable values raise ParseError.
void apply_config_file(TrainConfig& config, const std::string& path);

bool parse_depth(const std::string& text, Depth& out);
bool parse_readout(const std::string& text, ReadoutMode& out);
bool parse_pooling_mode(const std::string& text, PoolingMode& out);

}  // namespace igpool
