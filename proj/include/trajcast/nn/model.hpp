#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "trajcast/core/mat.hpp"
#include "trajcast/core/rng.hpp"
#include "trajcast/nn/dense.hpp"
#include "trajcast/nn/lstm.hpp"

namespace trajcast {

// Where the repeated target-state inputs (the first bypass_width features:
// positions and speeds) are injected past the recurrent path.
enum class BypassMode { to_output, before_dense, none };

inline const char* bypass_mode_name(BypassMode m) {
  switch (m) {
    case BypassMode::to_output: return "to_output";
    case BypassMode::before_dense: return "before_dense";
    case BypassMode::none: return "none";
  }
  return "?";
}

struct DenseSpec {
  size_t units = 0;
  Activation act = Activation::tanh_fn;

  bool operator==(const DenseSpec&) const = default;
};

struct ModelConfig {
  size_t input_size = 49;
  std::vector<size_t> lstm_layers = {256};
  std::vector<DenseSpec> dense_layers = {{256, Activation::tanh_fn}, {128, Activation::tanh_fn}};
  BypassMode bypass = BypassMode::to_output;
  size_t bypass_width = 4;
  size_t output_size = 20;
  bool use_type = false;
  bool use_ff = true;

  bool operator==(const ModelConfig&) const = default;

  void validate() const {
    if (input_size == 0 || output_size == 0)
      throw std::invalid_argument("ModelConfig: zero input or output size");
    for (size_t h : lstm_layers)
      if (h == 0) throw std::invalid_argument("ModelConfig: zero LSTM width");
    for (const auto& d : dense_layers)
      if (d.units == 0) throw std::invalid_argument("ModelConfig: zero dense width");
    if (bypass != BypassMode::none && bypass_width > input_size)
      throw std::invalid_argument("ModelConfig: bypass_width exceeds input_size");
  }
};

struct ModelParams {
  ModelConfig config;
  std::vector<LstmParams> lstm;
  std::vector<DenseParams> dense;
  DenseParams output;  // always linear
};

// Same shapes as `p`, all values zero. Doubles as the gradient container.
inline ModelParams zeros_like(const ModelParams& p) {
  ModelParams g;
  g.config = p.config;
  g.lstm.reserve(p.lstm.size());
  for (const auto& l : p.lstm) {
    LstmParams lg;
    lg.w_f = Mat(l.w_f.rows, l.w_f.cols);
    lg.w_i = Mat(l.w_i.rows, l.w_i.cols);
    lg.w_c = Mat(l.w_c.rows, l.w_c.cols);
    lg.w_o = Mat(l.w_o.rows, l.w_o.cols);
    lg.b_f.assign(l.b_f.size(), 0.0);
    lg.b_i.assign(l.b_i.size(), 0.0);
    lg.b_c.assign(l.b_c.size(), 0.0);
    lg.b_o.assign(l.b_o.size(), 0.0);
    g.lstm.push_back(std::move(lg));
  }
  g.dense.reserve(p.dense.size());
  for (const auto& d : p.dense)
    g.dense.push_back({Mat(d.w.rows, d.w.cols), Vec(d.b.size(), 0.0), d.act});
  g.output = {Mat(p.output.w.rows, p.output.w.cols), Vec(p.output.b.size(), 0.0),
              Activation::linear};
  return g;
}

// Named view over every parameter block, in the fixed serialization order.
struct ParamView {
  std::string name;
  double* data;
  size_t rows, cols;  // biases are rows x 1

  size_t size() const { return rows * cols; }
};

inline std::vector<ParamView> param_views(ModelParams& p) {
  std::vector<ParamView> v;
  for (size_t l = 0; l < p.lstm.size(); ++l) {
    const std::string base = "lstm" + std::to_string(l) + ".";
    LstmParams& lp = p.lstm[l];
    v.push_back({base + "w_f", lp.w_f.a.data(), lp.w_f.rows, lp.w_f.cols});
    v.push_back({base + "b_f", lp.b_f.data(), lp.b_f.size(), 1});
    v.push_back({base + "w_i", lp.w_i.a.data(), lp.w_i.rows, lp.w_i.cols});
    v.push_back({base + "b_i", lp.b_i.data(), lp.b_i.size(), 1});
    v.push_back({base + "w_c", lp.w_c.a.data(), lp.w_c.rows, lp.w_c.cols});
    v.push_back({base + "b_c", lp.b_c.data(), lp.b_c.size(), 1});
    v.push_back({base + "w_o", lp.w_o.a.data(), lp.w_o.rows, lp.w_o.cols});
    v.push_back({base + "b_o", lp.b_o.data(), lp.b_o.size(), 1});
  }
  for (size_t d = 0; d < p.dense.size(); ++d) {
    const std::string base = "dense" + std::to_string(d) + ".";
    v.push_back({base + "w", p.dense[d].w.a.data(), p.dense[d].w.rows, p.dense[d].w.cols});
    v.push_back({base + "b", p.dense[d].b.data(), p.dense[d].b.size(), 1});
  }
  v.push_back({"out.w", p.output.w.a.data(), p.output.w.rows, p.output.w.cols});
  v.push_back({"out.b", p.output.b.data(), p.output.b.size(), 1});
  return v;
}

inline size_t param_count(const ModelParams& p) {
  size_t n = 0;
  for (const auto& v : param_views(const_cast<ModelParams&>(p))) n += v.size();
  return n;
}

namespace detail {

inline void glorot_fill(Mat& w, size_t fan_in, size_t fan_out, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& x : w.a) x = rng.uniform(-bound, bound);
}

// Width of the input to the first dense layer / the output layer.
inline size_t dense_chain_input(const ModelConfig& c) {
  size_t w = c.lstm_layers.empty() ? c.input_size : c.lstm_layers.back();
  if (c.bypass == BypassMode::before_dense) w += c.bypass_width;
  return w;
}

inline size_t output_layer_input(const ModelConfig& c) {
  size_t w = c.dense_layers.empty() ? dense_chain_input(c) : c.dense_layers.back().units;
  if (c.bypass == BypassMode::to_output) w += c.bypass_width;
  return w;
}

}  // namespace detail

// Zero-valued parameters with the shape chain implied by the config.
inline ModelParams make_params(const ModelConfig& config) {
  config.validate();
  ModelParams p;
  p.config = config;

  size_t in = config.input_size;
  for (size_t h : config.lstm_layers) {
    LstmParams l;
    const size_t z = in + h;
    l.w_f = Mat(h, z);
    l.w_i = Mat(h, z);
    l.w_c = Mat(h, z);
    l.w_o = Mat(h, z);
    l.b_f.assign(h, 0.0);
    l.b_i.assign(h, 0.0);
    l.b_c.assign(h, 0.0);
    l.b_o.assign(h, 0.0);
    p.lstm.push_back(std::move(l));
    in = h;
  }

  size_t cur = detail::dense_chain_input(config);
  for (const auto& spec : config.dense_layers) {
    DenseParams d;
    d.w = Mat(spec.units, cur);
    d.b.assign(spec.units, 0.0);
    d.act = spec.act;
    p.dense.push_back(std::move(d));
    cur = spec.units;
  }

  const size_t out_in = detail::output_layer_input(config);
  p.output.w = Mat(config.output_size, out_in);
  p.output.b.assign(config.output_size, 0.0);
  p.output.act = Activation::linear;
  return p;
}

// Glorot-uniform weights, zero biases except the LSTM forget-gate bias at
// 1.0 (start remembering, learn to forget). Bitwise deterministic per seed.
inline ModelParams init_params(const ModelConfig& config, uint64_t seed) {
  ModelParams p = make_params(config);
  Rng rng(seed);
  for (auto& l : p.lstm) {
    const size_t h = l.hidden_size(), z = l.w_f.cols;
    detail::glorot_fill(l.w_f, z, h, rng);
    detail::glorot_fill(l.w_i, z, h, rng);
    detail::glorot_fill(l.w_c, z, h, rng);
    detail::glorot_fill(l.w_o, z, h, rng);
    l.b_f.assign(h, 1.0);
  }
  for (auto& d : p.dense) detail::glorot_fill(d.w, d.w.cols, d.w.rows, rng);
  detail::glorot_fill(p.output.w, p.output.w.cols, p.output.w.rows, rng);
  return p;
}

namespace detail {

inline Mat concat_bypass(const Mat& body, const Mat& seq, size_t bypass_width) {
  Mat out(body.rows, body.cols + bypass_width);
  for (size_t t = 0; t < body.rows; ++t) {
    std::copy(body.row(t), body.row(t) + body.cols, out.row(t));
    std::copy(seq.row(t), seq.row(t) + bypass_width, out.row(t) + body.cols);
  }
  return out;
}

}  // namespace detail

struct ForwardResult {
  Mat outputs;  // T x output_size
  std::vector<LstmState> final_states;
};

inline std::vector<LstmState> initial_states(const ModelConfig& config) {
  std::vector<LstmState> s;
  for (size_t h : config.lstm_layers) s.push_back(LstmState::zero(h));
  return s;
}

// All intermediates of one forward pass, for BPTT.
struct ForwardCache {
  std::vector<LstmCache> lstm;
  std::vector<Mat> lstm_out;    // output rows per recurrent layer
  std::vector<Mat> dense_in;    // input rows per dense layer
  std::vector<Mat> dense_out;   // activation rows per dense layer
  Mat output_in;
  Mat outputs;
};

inline ForwardResult model_forward(const ModelParams& p, const Mat& seq,
                                   const std::vector<LstmState>* init = nullptr,
                                   ForwardCache* cache = nullptr) {
  const ModelConfig& c = p.config;
  if (seq.cols != c.input_size)
    throw std::invalid_argument("model_forward: sequence width " + std::to_string(seq.cols) +
                                " does not match model input size " + std::to_string(c.input_size));
  if (init && init->size() != p.lstm.size())
    throw std::invalid_argument("model_forward: wrong number of initial states");

  ForwardResult res;
  Mat cur = seq;
  for (size_t l = 0; l < p.lstm.size(); ++l) {
    const LstmState init_l = init ? (*init)[l] : LstmState::zero(p.lstm[l].hidden_size());
    Mat h_out;
    LstmCache* lc = nullptr;
    if (cache) {
      cache->lstm.emplace_back();
      lc = &cache->lstm.back();
    }
    res.final_states.push_back(lstm_scan(p.lstm[l], cur, init_l, h_out, lc));
    if (cache) cache->lstm_out.push_back(h_out);
    cur = std::move(h_out);
  }

  if (c.bypass == BypassMode::before_dense)
    cur = detail::concat_bypass(cur, seq, c.bypass_width);

  for (size_t d = 0; d < p.dense.size(); ++d) {
    if (cache) cache->dense_in.push_back(cur);
    Mat next;
    dense_apply(p.dense[d], cur, next);
    if (cache) cache->dense_out.push_back(next);
    cur = std::move(next);
  }

  if (c.bypass == BypassMode::to_output)
    cur = detail::concat_bypass(cur, seq, c.bypass_width);
  if (cache) cache->output_in = cur;

  dense_apply(p.output, cur, res.outputs);
  if (cache) cache->outputs = res.outputs;
  return res;
}

// Mean squared error over every output entry of the sequence.
inline double sequence_mse(const Mat& outputs, const Mat& targets) {
  if (outputs.rows != targets.rows || outputs.cols != targets.cols)
    throw std::invalid_argument("sequence_mse: shape mismatch");
  double s = 0.0;
  for (size_t k = 0; k < outputs.a.size(); ++k) {
    const double e = outputs.a[k] - targets.a[k];
    s += e * e;
  }
  return s / static_cast<double>(outputs.a.size());
}

// Exact gradients of the MSE loss through the whole stack (output layer,
// dense chain, BPTT across every recurrent layer). Gradients are
// accumulated into `grads` scaled by `scale`; returns the loss.
inline double model_backward(const ModelParams& p, const Mat& seq, const Mat& targets,
                             ModelParams& grads, double scale = 1.0) {
  ForwardCache cache;
  model_forward(p, seq, nullptr, &cache);
  const Mat& outputs = cache.outputs;
  if (targets.rows != outputs.rows || targets.cols != outputs.cols)
    throw std::invalid_argument("model_backward: target shape mismatch");
  const double loss = sequence_mse(outputs, targets);

  const double inv = 2.0 / static_cast<double>(outputs.a.size());
  Mat dout(outputs.rows, outputs.cols);
  for (size_t k = 0; k < outputs.a.size(); ++k)
    dout.a[k] = inv * (outputs.a[k] - targets.a[k]);

  const ModelConfig& c = p.config;
  Mat dcur;
  dense_backward(p.output, cache.output_in, cache.outputs, dout, grads.output, dcur, scale);

  if (c.bypass == BypassMode::to_output) {
    // gradient w.r.t. the repeated inputs is not propagated anywhere
    Mat stripped(dcur.rows, dcur.cols - c.bypass_width);
    for (size_t t = 0; t < dcur.rows; ++t)
      std::copy(dcur.row(t), dcur.row(t) + stripped.cols, stripped.row(t));
    dcur = std::move(stripped);
  }

  for (size_t d = p.dense.size(); d-- > 0;) {
    Mat din;
    dense_backward(p.dense[d], cache.dense_in[d], cache.dense_out[d], dcur, grads.dense[d], din,
                   scale);
    dcur = std::move(din);
  }

  if (c.bypass == BypassMode::before_dense) {
    Mat stripped(dcur.rows, dcur.cols - c.bypass_width);
    for (size_t t = 0; t < dcur.rows; ++t)
      std::copy(dcur.row(t), dcur.row(t) + stripped.cols, stripped.row(t));
    dcur = std::move(stripped);
  }

  for (size_t l = p.lstm.size(); l-- > 0;) {
    Mat dx;
    const bool need_dx = l > 0;
    if (need_dx) dx = Mat(seq.rows, p.lstm[l].input_size());
    lstm_backward(p.lstm[l], cache.lstm[l], dcur, grads.lstm[l], need_dx ? &dx : nullptr, scale);
    if (need_dx) dcur = std::move(dx);
  }
  return loss;
}

}  // namespace trajcast
