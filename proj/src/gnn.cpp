#include "igpool/gnn.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace igpool {

namespace {

constexpr Scalar kNormEps = 1e-12;

MatX glorot_uniform(Index rows, Index cols, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  MatX w(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) w(i, j) = uniform(rng, -bound, bound);
  return w;
}

VecX softmax(const VecX& logits) {
  const VecX shifted = logits.array() - logits.maxCoeff();
  const VecX exps = shifted.array().exp();
  return exps / exps.sum();
}

void run_layer(const SpMat& adjacency, const MatX& input, const MatX& w,
               ForwardTrace::Layer& layer) {
  if (input.cols() != w.rows())
    throw std::invalid_argument("conv layer: dimension mismatch");
  layer.aggregated.noalias() = adjacency * input;
  layer.pre_norm.noalias() = layer.aggregated * w;
  layer.row_norms = layer.pre_norm.rowwise().norm();
  layer.normed.resize(layer.pre_norm.rows(), layer.pre_norm.cols());
  for (Index i = 0; i < layer.pre_norm.rows(); ++i)
    layer.normed.row(i) =
        layer.pre_norm.row(i) / std::max(layer.row_norms[i], kNormEps);
  layer.out = layer.normed.cwiseMax(Scalar(0));
}

// Gradient of run_layer: accumulates into dw, writes the input gradient.
void layer_backward(const SpMat& adjacency, const ForwardTrace::Layer& layer,
                    const MatX& w, const MatX& dout, MatX& dw, MatX& dinput) {
  MatX dnormed =
      dout.cwiseProduct((layer.normed.array() > 0.0).cast<Scalar>().matrix());
  MatX dpre(dnormed.rows(), dnormed.cols());
  for (Index i = 0; i < dnormed.rows(); ++i) {
    const Scalar norm = layer.row_norms[i];
    if (norm > kNormEps) {
      const Scalar along = dnormed.row(i).dot(layer.normed.row(i));
      dpre.row(i) = (dnormed.row(i) - along * layer.normed.row(i)) / norm;
    } else {
      dpre.row(i).setZero();
    }
  }
  dw.noalias() += layer.aggregated.transpose() * dpre;
  const MatX daggregated = dpre * w.transpose();
  dinput = adjacency.transpose() * daggregated;
}

}  // namespace

int conv_module_count(Depth depth) {
  switch (depth) {
    case Depth::Plain1: return 1;
    case Depth::Plain2: return 2;
    case Depth::Plain3: return 3;
    case Depth::Pooled2: return 2;
    case Depth::Pooled3: return 3;
  }
  throw std::logic_error("conv_module_count: bad depth");
}

int pooling_layer_count(Depth depth) {
  switch (depth) {
    case Depth::Plain1:
    case Depth::Plain2:
    case Depth::Plain3: return 0;
    case Depth::Pooled2: return 1;
    case Depth::Pooled3: return 2;
  }
  throw std::logic_error("pooling_layer_count: bad depth");
}

const char* to_string(Depth depth) {
  switch (depth) {
    case Depth::Plain1: return "plain-1";
    case Depth::Plain2: return "plain-2";
    case Depth::Plain3: return "plain-3";
    case Depth::Pooled2: return "pooled-2";
    case Depth::Pooled3: return "pooled-3";
  }
  return "?";
}

const char* to_string(ReadoutMode mode) {
  return mode == ReadoutMode::Sum ? "sum" : "mean";
}

const char* to_string(PoolingMode mode) {
  return mode == PoolingMode::Global ? "global" : "local";
}

ModelParams init_params(Index input_dim, int hidden, Index num_classes,
                        Depth depth, std::uint64_t seed) {
  if (input_dim < 1 || hidden < 1 || num_classes < 2)
    throw std::invalid_argument("init_params: bad dimensions");
  const int modules = conv_module_count(depth);

  ModelParams params;
  params.init_seed = seed;
  Rng rng(mix_seed(seed, 0));

  Index in = input_dim;
  for (int m = 0; m < modules; ++m) {
    ConvModule module;
    Index layer_in = in;
    for (int j = 0; j < 3; ++j) {
      module.weights[j] = glorot_uniform(layer_in, hidden, rng);
      layer_in = hidden;
    }
    params.conv.push_back(std::move(module));
    in = 3 * static_cast<Index>(hidden);
  }

  const Index readout_dim = static_cast<Index>(modules) * 3 * hidden;
  params.head_w1 = glorot_uniform(readout_dim, hidden, rng);
  params.head_b1 = VecX::Zero(hidden);
  params.head_w2 = glorot_uniform(hidden, num_classes, rng);
  params.head_b2 = VecX::Zero(num_classes);
  return params;
}

MatX conv_layer_forward(const SpMat& adjacency, const MatX& x, const MatX& w) {
  ForwardTrace::Layer layer;
  run_layer(adjacency, x, w, layer);
  return layer.out;
}

LayerSelections ForwardTrace::selections() const {
  LayerSelections result;
  for (const auto& scale : scales)
    if (!scale.selected.empty()) result.push_back(scale.selected);
  return result;
}

ForwardTrace forward(const Graph& graph, const ModelParams& params,
                     const NetConfig& config, bool training, Rng* dropout_rng,
                     const LayerSelections* frozen) {
  const int modules = conv_module_count(config.depth);
  const int pools = pooling_layer_count(config.depth);
  if (static_cast<int>(params.conv.size()) != modules)
    throw std::invalid_argument("forward: parameters do not match depth");
  if (graph.num_nodes() == 0)
    throw std::invalid_argument("forward: empty graph");
  if (graph.feature_dim() != params.input_dim())
    throw std::invalid_argument("forward: feature dimension mismatch");
  if (pools > 0) validate(config.pool);
  if (!(config.dropout >= 0.0 && config.dropout < 1.0))
    throw std::invalid_argument("forward: dropout must be in [0, 1)");
  const bool use_dropout = training && config.dropout > 0.0;
  if (use_dropout && dropout_rng == nullptr)
    throw std::invalid_argument("forward: dropout requires a generator");
  if (frozen && static_cast<int>(frozen->size()) != pools)
    throw std::invalid_argument("forward: frozen selection count mismatch");

  ForwardTrace trace;
  trace.scales.resize(static_cast<std::size_t>(modules));

  SpMat adjacency = graph.adjacency;
  MatX x = graph.features;
  for (int t = 0; t < modules; ++t) {
    auto& scale = trace.scales[static_cast<std::size_t>(t)];
    scale.adjacency = std::move(adjacency);
    scale.input = std::move(x);

    const MatX* layer_in = &scale.input;
    for (int j = 0; j < 3; ++j) {
      run_layer(scale.adjacency, *layer_in, params.conv[t].weights[j],
                scale.layers[j]);
      layer_in = &scale.layers[j].out;
    }
    const Index n = scale.input.rows();
    const Index hidden = params.conv[t].hidden();
    scale.module_out.resize(n, 3 * hidden);
    scale.module_out << scale.layers[0].out, scale.layers[1].out,
        scale.layers[2].out;

    if (config.readout == ReadoutMode::Sum)
      scale.readout = scale.module_out.colwise().sum().transpose();
    else
      scale.readout = scale.module_out.colwise().mean().transpose();

    if (t + 1 < modules) {
      Graph current;
      current.adjacency = scale.adjacency;
      current.features = scale.module_out;
      if (pools > 0) {
        std::vector<Index> chosen;
        if (frozen) {
          chosen = (*frozen)[static_cast<std::size_t>(t)];
        } else {
          VecX gains = information_gain(current, config.pool.k);
          if (config.pool.mode == PoolingMode::Local)
            gains = normalized_gain(current, gains);
          chosen = select_nodes(gains, config.pool.ratio);
        }
        PoolingResult pooled =
            coarsen_with_selection(current, std::move(chosen), config.pool);
        scale.selected = pooled.selected;
        adjacency = std::move(pooled.coarse.adjacency);
        x = std::move(pooled.coarse.features);
      } else {
        adjacency = scale.adjacency;
        x = scale.module_out;
      }
    }
  }

  VecX embedding(params.readout_dim());
  Index offset = 0;
  for (const auto& scale : trace.scales) {
    embedding.segment(offset, scale.readout.size()) = scale.readout;
    offset += scale.readout.size();
  }
  if (offset != params.readout_dim())
    throw std::invalid_argument("forward: readout dimension mismatch");
  trace.graph_embedding = std::move(embedding);

  trace.head_pre_act =
      params.head_w1.transpose() * trace.graph_embedding + params.head_b1;
  trace.head_hidden = trace.head_pre_act.cwiseMax(Scalar(0));
  if (use_dropout) {
    const double keep = 1.0 - config.dropout;
    trace.dropout_mask.resize(trace.head_hidden.size());
    for (Index i = 0; i < trace.dropout_mask.size(); ++i)
      trace.dropout_mask[i] =
          uniform01(*dropout_rng) < keep ? 1.0 / keep : 0.0;
    trace.head_dropped = trace.head_hidden.cwiseProduct(trace.dropout_mask);
  } else {
    trace.head_dropped = trace.head_hidden;
  }
  trace.logits = params.head_w2.transpose() * trace.head_dropped + params.head_b2;
  trace.probs = softmax(trace.logits);
  return trace;
}

std::vector<Eigen::Map<Eigen::ArrayXd>> parameter_views(ModelParams& params) {
  std::vector<Eigen::Map<Eigen::ArrayXd>> views;
  for (auto& module : params.conv)
    for (auto& w : module.weights) views.emplace_back(w.data(), w.size());
  views.emplace_back(params.head_w1.data(), params.head_w1.size());
  views.emplace_back(params.head_b1.data(), params.head_b1.size());
  views.emplace_back(params.head_w2.data(), params.head_w2.size());
  views.emplace_back(params.head_b2.data(), params.head_b2.size());
  return views;
}

std::vector<Eigen::Map<const Eigen::ArrayXd>> gradient_views(
    const Gradients& grads) {
  std::vector<Eigen::Map<const Eigen::ArrayXd>> views;
  for (const auto& module : grads.conv)
    for (const auto& w : module) views.emplace_back(w.data(), w.size());
  views.emplace_back(grads.head_w1.data(), grads.head_w1.size());
  views.emplace_back(grads.head_b1.data(), grads.head_b1.size());
  views.emplace_back(grads.head_w2.data(), grads.head_w2.size());
  views.emplace_back(grads.head_b2.data(), grads.head_b2.size());
  return views;
}

Gradients Gradients::zeros_like(const ModelParams& params) {
  Gradients g;
  g.conv.resize(params.conv.size());
  for (std::size_t m = 0; m < params.conv.size(); ++m)
    for (int j = 0; j < 3; ++j)
      g.conv[m][j] = MatX::Zero(params.conv[m].weights[j].rows(),
                                params.conv[m].weights[j].cols());
  g.head_w1 = MatX::Zero(params.head_w1.rows(), params.head_w1.cols());
  g.head_b1 = VecX::Zero(params.head_b1.size());
  g.head_w2 = MatX::Zero(params.head_w2.rows(), params.head_w2.cols());
  g.head_b2 = VecX::Zero(params.head_b2.size());
  return g;
}

double cross_entropy(const VecX& probs, int label) {
  if (label < 0 || label >= probs.size())
    throw std::invalid_argument("cross_entropy: label out of range");
  return -std::log(std::max(probs[label], 1e-300));
}

void backward(const ForwardTrace& trace, const ModelParams& params,
              const NetConfig& config, int label, double scale_factor,
              Gradients& grads) {
  const int modules = static_cast<int>(trace.scales.size());
  if (label < 0 || label >= params.num_classes())
    throw std::invalid_argument("backward: label out of range");

  VecX dlogits = trace.probs * scale_factor;
  dlogits[label] -= scale_factor;

  grads.head_w2.noalias() += trace.head_dropped * dlogits.transpose();
  grads.head_b2 += dlogits;
  VecX ddropped = params.head_w2 * dlogits;
  VecX dhidden = trace.dropout_mask.size() > 0
                     ? VecX(ddropped.cwiseProduct(trace.dropout_mask))
                     : ddropped;
  const VecX dpre_act = dhidden.cwiseProduct(
      (trace.head_pre_act.array() > 0.0).cast<Scalar>().matrix());

  grads.head_w1.noalias() += trace.graph_embedding * dpre_act.transpose();
  grads.head_b1 += dpre_act;
  const VecX dembedding = params.head_w1 * dpre_act;

  std::vector<VecX> dreadout(static_cast<std::size_t>(modules));
  Index offset = 0;
  for (int t = 0; t < modules; ++t) {
    const Index m = trace.scales[static_cast<std::size_t>(t)].readout.size();
    dreadout[static_cast<std::size_t>(t)] = dembedding.segment(offset, m);
    offset += m;
  }

  MatX dnext_input;  // gradient w.r.t. the input of module t+1
  for (int t = modules - 1; t >= 0; --t) {
    const auto& scale = trace.scales[static_cast<std::size_t>(t)];
    const Index n = scale.module_out.rows();
    MatX dmodule = MatX::Zero(n, scale.module_out.cols());
    if (config.readout == ReadoutMode::Sum)
      dmodule.rowwise() += dreadout[static_cast<std::size_t>(t)].transpose();
    else
      dmodule.rowwise() +=
          (dreadout[static_cast<std::size_t>(t)] / static_cast<double>(n))
              .transpose();

    if (t + 1 < modules) {
      if (!scale.selected.empty()) {
        for (std::size_t r = 0; r < scale.selected.size(); ++r)
          dmodule.row(scale.selected[r]) +=
              dnext_input.row(static_cast<Index>(r));
      } else {
        dmodule += dnext_input;
      }
    }

    const Index hidden = params.conv[t].hidden();
    MatX dy2 = dmodule.middleCols(2 * hidden, hidden);
    MatX dy1 = dmodule.middleCols(hidden, hidden);
    MatX dy0 = dmodule.middleCols(0, hidden);

    MatX dinput;
    layer_backward(scale.adjacency, scale.layers[2], params.conv[t].weights[2],
                   dy2, grads.conv[t][2], dinput);
    dy1 += dinput;
    layer_backward(scale.adjacency, scale.layers[1], params.conv[t].weights[1],
                   dy1, grads.conv[t][1], dinput);
    dy0 += dinput;
    layer_backward(scale.adjacency, scale.layers[0], params.conv[t].weights[0],
                   dy0, grads.conv[t][0], dinput);
    dnext_input = std::move(dinput);
  }
}

namespace {

void add_weight_decay(const ModelParams& params, double weight_decay,
                      double& loss, Gradients* grads) {
  if (weight_decay == 0.0) return;
  auto apply = [&](const MatX& w, MatX* gw) {
    loss += 0.5 * weight_decay * w.squaredNorm();
    if (gw) *gw += weight_decay * w;
  };
  for (std::size_t m = 0; m < params.conv.size(); ++m)
    for (int j = 0; j < 3; ++j)
      apply(params.conv[m].weights[j], grads ? &grads->conv[m][j] : nullptr);
  apply(params.head_w1, grads ? &grads->head_w1 : nullptr);
  apply(params.head_w2, grads ? &grads->head_w2 : nullptr);
}

}  // namespace

LossResult loss_and_gradients(const std::vector<const Graph*>& batch,
                              const ModelParams& params,
                              const NetConfig& config, double weight_decay,
                              bool training, Rng* dropout_rng,
                              const std::vector<LayerSelections>* frozen) {
  if (batch.empty())
    throw std::invalid_argument("loss_and_gradients: empty batch");
  if (frozen && frozen->size() != batch.size())
    throw std::invalid_argument("loss_and_gradients: frozen batch mismatch");

  LossResult result;
  result.grads = Gradients::zeros_like(params);
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Graph* graph = batch[i];
    if (!graph->has_label())
      throw std::invalid_argument("loss_and_gradients: graph without label");
    const ForwardTrace trace =
        forward(*graph, params, config, training, dropout_rng,
                frozen ? &(*frozen)[i] : nullptr);
    result.loss += inv * cross_entropy(trace.probs, graph->label);
    Index predicted = 0;
    trace.probs.maxCoeff(&predicted);
    if (static_cast<int>(predicted) == graph->label) ++result.correct;
    backward(trace, params, config, graph->label, inv, result.grads);
  }
  add_weight_decay(params, weight_decay, result.loss, &result.grads);
  return result;
}

double batch_loss(const std::vector<const Graph*>& batch,
                  const ModelParams& params, const NetConfig& config,
                  double weight_decay,
                  const std::vector<LayerSelections>* frozen) {
  if (batch.empty()) throw std::invalid_argument("batch_loss: empty batch");
  if (frozen && frozen->size() != batch.size())
    throw std::invalid_argument("batch_loss: frozen batch mismatch");
  double loss = 0.0;
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Graph* graph = batch[i];
    if (!graph->has_label())
      throw std::invalid_argument("batch_loss: graph without label");
    const ForwardTrace trace =
        forward(*graph, params, config, false, nullptr,
                frozen ? &(*frozen)[i] : nullptr);
    loss += inv * cross_entropy(trace.probs, graph->label);
  }
  add_weight_decay(params, weight_decay, loss, nullptr);
  return loss;
}

// --- checkpoint serialization -----------------------------------------

namespace {

constexpr char kMagic[4] = {'I', 'G', 'P', 'K'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void read_pod(std::istream& in, T& value) {
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("checkpoint: truncated file");
}

void write_matrix(std::ostream& out, const MatX& m) {
  write_pod<std::uint64_t>(out, static_cast<std::uint64_t>(m.rows()));
  write_pod<std::uint64_t>(out, static_cast<std::uint64_t>(m.cols()));
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(sizeof(Scalar) * m.size()));
}

MatX read_matrix(std::istream& in) {
  std::uint64_t rows = 0, cols = 0;
  read_pod(in, rows);
  read_pod(in, cols);
  if (rows > (1u << 24) || cols > (1u << 24))
    throw std::runtime_error("checkpoint: implausible tensor shape");
  MatX m(static_cast<Index>(rows), static_cast<Index>(cols));
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(Scalar) * m.size()));
  if (!in) throw std::runtime_error("checkpoint: truncated tensor");
  return m;
}

void write_vector(std::ostream& out, const VecX& v) {
  write_pod<std::uint64_t>(out, static_cast<std::uint64_t>(v.size()));
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(sizeof(Scalar) * v.size()));
}

VecX read_vector(std::istream& in) {
  std::uint64_t size = 0;
  read_pod(in, size);
  if (size > (1u << 24))
    throw std::runtime_error("checkpoint: implausible vector size");
  VecX v(static_cast<Index>(size));
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(sizeof(Scalar) * v.size()));
  if (!in) throw std::runtime_error("checkpoint: truncated vector");
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const ModelParams& params,
                     const NetConfig& config) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("checkpoint: cannot open " + tmp);
    out.write(kMagic, sizeof(kMagic));
    write_pod(out, kVersion);
    write_pod(out, params.init_seed);
    write_pod<std::uint8_t>(out, static_cast<std::uint8_t>(config.depth));
    write_pod<std::uint8_t>(out, static_cast<std::uint8_t>(config.readout));
    write_pod<std::uint8_t>(out, static_cast<std::uint8_t>(config.pool.mode));
    write_pod<std::uint8_t>(out, config.pool.weighted ? 1 : 0);
    write_pod<std::int32_t>(out, config.pool.k);
    write_pod<std::int32_t>(out, config.pool.s);
    write_pod<double>(out, config.pool.ratio);
    write_pod<double>(out, config.dropout);
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(params.conv.size()));
    for (const auto& module : params.conv)
      for (const auto& w : module.weights) write_matrix(out, w);
    write_matrix(out, params.head_w1);
    write_vector(out, params.head_b1);
    write_matrix(out, params.head_w2);
    write_vector(out, params.head_b2);
    if (!out) throw std::runtime_error("checkpoint: write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("checkpoint: cannot rename into " + path);
}

std::pair<ModelParams, NetConfig> load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("checkpoint: bad magic in " + path);
  std::uint32_t version = 0;
  read_pod(in, version);
  if (version != kVersion)
    throw std::runtime_error("checkpoint: unsupported version");

  ModelParams params;
  NetConfig config;
  read_pod(in, params.init_seed);
  std::uint8_t depth = 0, readout = 0, mode = 0, weighted = 0;
  read_pod(in, depth);
  read_pod(in, readout);
  read_pod(in, mode);
  read_pod(in, weighted);
  if (depth > 4 || readout > 1 || mode > 1 || weighted > 1)
    throw std::runtime_error("checkpoint: bad enum value");
  config.depth = static_cast<Depth>(depth);
  config.readout = static_cast<ReadoutMode>(readout);
  config.pool.mode = static_cast<PoolingMode>(mode);
  config.pool.weighted = weighted != 0;
  std::int32_t k = 0, s = 0;
  read_pod(in, k);
  read_pod(in, s);
  config.pool.k = k;
  config.pool.s = s;
  read_pod(in, config.pool.ratio);
  read_pod(in, config.dropout);

  std::uint32_t modules = 0;
  read_pod(in, modules);
  if (modules != static_cast<std::uint32_t>(conv_module_count(config.depth)))
    throw std::runtime_error("checkpoint: module count does not match depth");
  params.conv.resize(modules);
  for (auto& module : params.conv)
    for (auto& w : module.weights) w = read_matrix(in);
  params.head_w1 = read_matrix(in);
  params.head_b1 = read_vector(in);
  params.head_w2 = read_matrix(in);
  params.head_b2 = read_vector(in);
  return {std::move(params), std::move(config)};
}

}  // namespace igpool
