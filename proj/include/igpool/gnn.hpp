#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "igpool/pooling.hpp"
#include "igpool/rng.hpp"

namespace igpool {

enum class ReadoutMode { Sum, Mean };

/// Network depth. The number is the count of convolution modules;
/// "pooled" variants insert a pooling layer between consecutive modules,
/// "plain" variants stack modules at the original scale.
enum class Depth { Plain1, Plain2, Plain3, Pooled2, Pooled3 };

int conv_module_count(Depth depth);
int pooling_layer_count(Depth depth);

/// Three stacked convolution layers sharing one adjacency; the module
/// output is the concatenation of the three layer outputs (n x 3*hidden).
struct ConvModule {
  std::array<MatX, 3> weights;

  Index in_dim() const { return weights[0].rows(); }
  Index hidden() const { return weights[0].cols(); }
  Index out_dim() const { return 3 * hidden(); }
};

/// All trainable state: convolution weights plus a two-layer prediction
/// head, together with the seed the initialization was drawn from.
struct ModelParams {
  std::vector<ConvModule> conv;
  MatX head_w1;  // readout_dim x hidden
  VecX head_b1;
  MatX head_w2;  // hidden x num_classes
  VecX head_b2;
  std::uint64_t init_seed = 0;

  Index input_dim() const { return conv.front().in_dim(); }
  Index hidden() const { return conv.front().hidden(); }
  Index num_classes() const { return head_w2.cols(); }
  Index readout_dim() const { return head_w1.rows(); }
};

/// Architecture and pooling choices needed to run the network on a graph.
struct NetConfig {
  Depth depth = Depth::Plain1;
  ReadoutMode readout = ReadoutMode::Sum;
  PoolingConfig pool;     // consulted only when the depth pools
  double dropout = 0.0;   // first head layer, training passes only
};

/// Glorot-uniform weight matrices and zero biases, all drawn from streams
/// derived from `seed`.
ModelParams init_params(Index input_dim, int hidden, Index num_classes,
                        Depth depth, std::uint64_t seed);

/// One forward pass: Y = ReLU(rownorm(A X W)) where rownorm scales each
/// row by 1/max(||row||_2, 1e-12).
MatX conv_layer_forward(const SpMat& adjacency, const MatX& x, const MatX& w);

/// Node choices made by the pooling layers of one pass; selections[t]
/// holds indices local to the scale that layer pooled.
using LayerSelections = std::vector<std::vector<Index>>;

/// Every intermediate needed to backpropagate one graph.
struct ForwardTrace {
  struct Layer {
    MatX aggregated;  // A * input
    MatX pre_norm;    // (A * input) * W
    VecX row_norms;
    MatX normed;
    MatX out;  // relu(normed)
  };
  struct Scale {
    SpMat adjacency;
    MatX input;
    std::array<Layer, 3> layers;
    MatX module_out;  // concatenated layer outputs
    VecX readout;
    std::vector<Index> selected;  // empty when no pooling follows
  };

  std::vector<Scale> scales;
  VecX graph_embedding;  // concatenated per-scale readouts
  VecX head_pre_act;
  VecX head_hidden;     // relu(head_pre_act)
  VecX dropout_mask;    // empty when dropout is off
  VecX head_dropped;    // head_hidden after (inverted) dropout
  VecX logits;
  VecX probs;

  LayerSelections selections() const;
};

/// Runs the hierarchical network on one graph. Rejects empty graphs and
/// feature dimensions that do not match the first layer. When `frozen` is
/// non-null it must hold one node choice per pooling layer; those nodes
/// are kept instead of re-ranking by information gain. Dropout requires
/// `training` and a generator.
ForwardTrace forward(const Graph& graph, const ModelParams& params,
                     const NetConfig& config, bool training = false,
                     Rng* dropout_rng = nullptr,
                     const LayerSelections* frozen = nullptr);

/// Gradient of every trainable tensor, laid out exactly like ModelParams.
struct Gradients {
  std::vector<std::array<MatX, 3>> conv;
  MatX head_w1;
  VecX head_b1;
  MatX head_w2;
  VecX head_b2;

  static Gradients zeros_like(const ModelParams& params);
};

double cross_entropy(const VecX& probs, int label);

/// Accumulates scale * d(cross_entropy)/d(theta) for one traced graph.
/// The pooling node choices recorded in the trace are treated as constants.
void backward(const ForwardTrace& trace, const ModelParams& params,
              const NetConfig& config, int label, double scale,
              Gradients& grads);

struct LossResult {
  double loss = 0.0;  // mean cross-entropy + 0.5 * weight_decay * ||W||^2
  int correct = 0;    // argmax hits over the batch
  Gradients grads;
};

/// Flat views over every trainable tensor in a fixed order; Gradients
/// share the same layout, so optimizers and gradient checks can walk the
/// two in lockstep.
std::vector<Eigen::Map<Eigen::ArrayXd>> parameter_views(ModelParams& params);
std::vector<Eigen::Map<const Eigen::ArrayXd>> gradient_views(
    const Gradients& grads);

/// Mean cross-entropy over the batch plus the weight-decay term over all
/// weight matrices (biases excluded), with exact gradients. `frozen`, when
/// given, pins the pooling choices per graph so the loss is smooth in the
/// weights.
LossResult loss_and_gradients(const std::vector<const Graph*>& batch,
                              const ModelParams& params,
                              const NetConfig& config, double weight_decay,
                              bool training = false,
                              Rng* dropout_rng = nullptr,
                              const std::vector<LayerSelections>* frozen = nullptr);

/// Loss only, same definition as loss_and_gradients; used by gradient
/// validation via finite differences.
double batch_loss(const std::vector<const Graph*>& batch,
                  const ModelParams& params, const NetConfig& config,
                  double weight_decay,
                  const std::vector<LayerSelections>* frozen = nullptr);

/// Binary checkpoint of ModelParams plus the NetConfig needed to run it;
/// round-trips bit-exactly. Layout documented in the README.
void save_checkpoint(const std::string& path, const ModelParams& params,
                     const NetConfig& config);
std::pair<ModelParams, NetConfig> load_checkpoint(const std::string& path);

const char* to_string(Depth depth);
const char* to_string(ReadoutMode mode);
const char* to_string(PoolingMode mode);

}  // namespace igpool
