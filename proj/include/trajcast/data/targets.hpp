#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "trajcast/core/mat.hpp"
#include "trajcast/data/scaling.hpp"
#include "trajcast/filter/savgol.hpp"

namespace trajcast {

// Prediction lead times. At 10 Hz a horizon of k seconds is 10k frames.
struct HorizonSpec {
  std::vector<int> horizons_s = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  int frames_per_second = 10;

  void validate() const {
    if (horizons_s.empty()) throw std::invalid_argument("HorizonSpec: empty horizon list");
    for (size_t i = 0; i < horizons_s.size(); ++i) {
      if (horizons_s[i] <= 0) throw std::invalid_argument("HorizonSpec: horizons must be positive");
      if (i > 0 && horizons_s[i] <= horizons_s[i - 1])
        throw std::invalid_argument("HorizonSpec: horizons must be ascending");
    }
  }

  size_t count() const { return horizons_s.size(); }
  size_t output_size() const { return 2 * horizons_s.size(); }
  size_t frame_offset(size_t i) const {
    return static_cast<size_t>(horizons_s[i]) * static_cast<size_t>(frames_per_second);
  }
};

// Scaled output vector for one frame: (x_hat^k, vy_hat^k) pairs in
// ascending horizon order, so length is 2 * K.
using TargetFrame = Vec;

// Per-frame multi-horizon targets: frame t receives the lateral position
// and longitudinal velocity observed 10k frames later, scaled like the
// corresponding inputs. Frames whose largest horizon runs past the end of
// the track get no target.
inline std::vector<std::optional<TargetFrame>> compute_targets(const SmoothedTrack& track,
                                                               const HorizonSpec& horizons,
                                                               const ScalingSpec& scaling) {
  horizons.validate();
  scaling.validate();
  const size_t n = track.size();
  const size_t max_offset = horizons.frame_offset(horizons.count() - 1);
  std::vector<std::optional<TargetFrame>> out(n);
  for (size_t t = 0; t < n; ++t) {
    if (t + max_offset >= n) continue;
    TargetFrame tf;
    tf.reserve(horizons.output_size());
    for (size_t k = 0; k < horizons.count(); ++k) {
      const size_t j = t + horizons.frame_offset(k);
      tf.push_back(track.x[j] / scaling.distance_divisor);
      tf.push_back(track.vy[j] / scaling.long_velocity_divisor);
    }
    out[t] = std::move(tf);
  }
  return out;
}

// Inverse of the target scaling: back to meters / m/s.
inline void unscale_targets_in_place(Vec& t, const ScalingSpec& scaling) {
  for (size_t i = 0; i + 1 < t.size(); i += 2) {
    t[i] *= scaling.distance_divisor;
    t[i + 1] *= scaling.long_velocity_divisor;
  }
}

}  // namespace trajcast
