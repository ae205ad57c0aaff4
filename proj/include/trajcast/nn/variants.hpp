#pragma once

#include <array>
#include <string>

#include "trajcast/core/error.hpp"
#include "trajcast/data/scaling.hpp"
#include "trajcast/nn/model.hpp"

namespace trajcast {

// The eight architecture variants under comparison. Each one is the
// reference design with a single change.
inline const std::array<std::string, 8>& variant_names() {
  static const std::array<std::string, 8> names = {
      "reference",     "type",         "no-ff",    "no-bypass",
      "bypass-before", "linear-activation", "two-lstm", "three-dense"};
  return names;
}

inline FeatureConfig variant_feature_config(const std::string& variant) {
  FeatureConfig cfg;
  if (variant == "type") cfg.use_type = true;
  else if (variant == "no-ff") cfg.use_ff = false;
  return cfg;
}

// Reference: LSTM(256) -> dense 256 tanh -> dense 128 tanh -> linear
// output, with the first four inputs repeated into the output layer.
inline ModelConfig variant_config(const std::string& variant, size_t output_size = 20) {
  const FeatureConfig fc = variant_feature_config(variant);
  ModelConfig c;
  c.input_size = feature_width(fc);
  c.output_size = output_size;
  c.use_type = fc.use_type;
  c.use_ff = fc.use_ff;
  c.lstm_layers = {256};
  c.dense_layers = {{256, Activation::tanh_fn}, {128, Activation::tanh_fn}};
  c.bypass = BypassMode::to_output;
  c.bypass_width = 4;

  if (variant == "reference" || variant == "type" || variant == "no-ff") {
    // covered by the feature config
  } else if (variant == "no-bypass") {
    c.bypass = BypassMode::none;
  } else if (variant == "bypass-before") {
    c.bypass = BypassMode::before_dense;
  } else if (variant == "linear-activation") {
    c.dense_layers[1].act = Activation::linear;
  } else if (variant == "two-lstm") {
    c.lstm_layers = {256, 256};
  } else if (variant == "three-dense") {
    c.dense_layers.push_back({64, Activation::tanh_fn});
  } else {
    throw data_error("unknown model variant '" + variant + "'");
  }
  return c;
}

// Shrinks every hidden layer for desk-scale runs, keeping the topology.
inline ModelConfig scaled_config(ModelConfig c, size_t hidden) {
  for (auto& h : c.lstm_layers) h = hidden;
  for (auto& d : c.dense_layers) d.units = hidden;
  return c;
}

}  // namespace trajcast
