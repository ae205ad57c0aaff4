#pragma once

#include <algorithm>
#include <cmath>

#include "trajcast/nn/model.hpp"

namespace trajcast {

// Compares every analytic gradient coordinate against a central finite
// difference of the loss. Returns the worst relative error
//   |analytic - numeric| / max(|analytic|, |numeric|, 1e-12).
// Meant for small models; the cost is two forward passes per parameter.
inline double gradient_check(const ModelParams& params, const Mat& seq, const Mat& targets,
                             double eps = 1e-5) {
  ModelParams grads = zeros_like(params);
  model_backward(params, seq, targets, grads, 1.0);

  ModelParams probe = params;  // perturbed in place, restored after each coordinate
  auto pv = param_views(probe);
  auto gv = param_views(grads);

  double worst = 0.0;
  for (size_t b = 0; b < pv.size(); ++b) {
    for (size_t k = 0; k < pv[b].size(); ++k) {
      double& x = pv[b].data[k];
      const double saved = x;
      x = saved + eps;
      const double up = sequence_mse(model_forward(probe, seq).outputs, targets);
      x = saved - eps;
      const double down = sequence_mse(model_forward(probe, seq).outputs, targets);
      x = saved;

      const double numeric = (up - down) / (2.0 * eps);
      const double analytic = gv[b].data[k];
      const double diff = std::abs(analytic - numeric);
      if (diff == 0.0) continue;
      const double rel = diff / std::max({std::abs(analytic), std::abs(numeric), 1e-12});
      worst = std::max(worst, rel);
    }
  }
  return worst;
}

}  // namespace trajcast
