#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "trajcast/core/mat.hpp"
#include "trajcast/data/targets.hpp"

namespace trajcast {

constexpr size_t kWindowLength = 100;  // 10 s of inputs at 10 Hz
constexpr size_t kWindowStride = 10;   // one window every second

// Fixed-length training sample: 100 input rows with a complete target for
// every row. Consecutive windows of one track overlap by 90 frames.
struct Window {
  int64_t vehicle_id = 0;
  int64_t start_frame = 0;
  Mat inputs;   // length x N
  Mat targets;  // length x 2K

  bool operator==(const Window&) const = default;
};

inline std::vector<Window> make_windows(int64_t vehicle_id,
                                        const std::vector<int64_t>& frame_ids,
                                        const std::vector<Vec>& features,
                                        const std::vector<std::optional<TargetFrame>>& targets,
                                        size_t length = kWindowLength,
                                        size_t stride = kWindowStride) {
  std::vector<Window> out;
  const size_t n = features.size();
  if (n < length || length == 0 || stride == 0) return out;
  const size_t width = features[0].size();
  const size_t target_width = [&] {
    for (const auto& t : targets)
      if (t) return t->size();
    return size_t{0};
  }();

  for (size_t start = 0; start + length <= n; start += stride) {
    bool complete = true;
    for (size_t i = start; i < start + length; ++i) {
      if (!targets[i]) {
        complete = false;
        break;
      }
    }
    if (!complete) continue;
    Window w;
    w.vehicle_id = vehicle_id;
    w.start_frame = frame_ids[start];
    w.inputs = Mat(length, width);
    w.targets = Mat(length, target_width);
    for (size_t i = 0; i < length; ++i) {
      const Vec& f = features[start + i];
      const TargetFrame& t = *targets[start + i];
      for (size_t j = 0; j < width; ++j) w.inputs(i, j) = f[j];
      for (size_t j = 0; j < target_width; ++j) w.targets(i, j) = t[j];
    }
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace trajcast
