#pragma once

#include <cmath>
#include <stdexcept>

#include "trajcast/core/mat.hpp"
#include "trajcast/nn/model.hpp"

namespace trajcast {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Flat first/second moment buffers over the parameter blocks in their
// fixed enumeration order.
struct AdamState {
  Vec m, v;
  size_t step = 0;

  static AdamState make(const ModelParams& params) {
    AdamState s;
    const size_t n = param_count(params);
    s.m.assign(n, 0.0);
    s.v.assign(n, 0.0);
    return s;
  }
};

// Standard bias-corrected Adam update, elementwise over all parameters.
inline void adam_update(ModelParams& params, const ModelParams& grads, AdamState& state,
                        const AdamConfig& cfg = {}) {
  auto pv = param_views(params);
  auto gv = param_views(const_cast<ModelParams&>(grads));
  if (pv.size() != gv.size()) throw std::invalid_argument("adam_update: structure mismatch");

  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);

  size_t off = 0;
  for (size_t b = 0; b < pv.size(); ++b) {
    if (pv[b].size() != gv[b].size()) throw std::invalid_argument("adam_update: block size mismatch");
    double* p = pv[b].data;
    const double* g = gv[b].data;
    for (size_t k = 0; k < pv[b].size(); ++k) {
      double& m = state.m[off + k];
      double& v = state.v[off + k];
      m = cfg.beta1 * m + (1.0 - cfg.beta1) * g[k];
      v = cfg.beta2 * v + (1.0 - cfg.beta2) * g[k] * g[k];
      const double m_hat = m / c1;
      const double v_hat = v / c2;
      p[k] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
    off += pv[b].size();
  }
}

}  // namespace trajcast
