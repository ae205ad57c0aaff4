#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <vector>

#include "trajcast/core/rng.hpp"
#include "trajcast/ngsim/records.hpp"

namespace trajcast {

// Synthetic highway corpus: vehicles enter a fixed-length road segment
// staggered in time, drive it at constant speed and leave at the far end;
// a fraction performs one scripted lane change mid-crossing. Mirrors the
// geometry of real recordings (every trajectory sweeps the same
// longitudinal range) and exercises the whole chain without real data.
struct SynthSpec {
  size_t n_vehicles = 20;
  double lane_change_fraction = 0.2;
  size_t n_frames = 900;        // corpus duration (10 Hz ticks)
  int n_lanes = 5;
  double lane_width = 3.6;      // m
  double road_length = 500.0;   // m
  double min_speed = 10.0;      // m/s
  double max_speed = 20.0;      // m/s
  double headway = 60.0;        // m, spacing between same-lane entries
  size_t lane_stagger_frames = 0;  // per-lane phase offset of the entry schedule
  size_t lane_change_frames = 40;  // scripted transition length at 10 Hz
  double lateral_jitter = 0.0;  // m, per-vehicle offset from the lane center
  double speed_jitter = 0.0;    // m/s, per-vehicle offset from the lane speed
  double position_noise = 0.0;  // m, uniform, both coordinates
  uint64_t seed = 1;
};

namespace detail {

inline double smoothstep01(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * (3.0 - 2.0 * u);
}

}  // namespace detail

inline std::vector<TrajectoryRecord> generate_synthetic_records(const SynthSpec& spec) {
  Rng rng(spec.seed);

  struct Plan {
    int64_t id = 0;
    int lane0 = 1;
    double speed = 0, x0 = 0;
    size_t entry_frame = 1;
    VehicleClass cls = VehicleClass::car;
    bool changes_lane = false;
    int lane_dir = 0;
    size_t change_frame = 0;
    size_t change_duration = 40;
  };

  // one speed per lane keeps same-lane gaps constant
  std::vector<double> lane_speed(static_cast<size_t>(spec.n_lanes));
  for (auto& s : lane_speed) s = rng.uniform(spec.min_speed, spec.max_speed);

  const size_t n_changers = static_cast<size_t>(
      std::llround(spec.lane_change_fraction * static_cast<double>(spec.n_vehicles)));

  std::vector<Plan> plans;
  std::vector<size_t> per_lane(static_cast<size_t>(spec.n_lanes), 0);
  for (size_t v = 0; v < spec.n_vehicles; ++v) {
    Plan p;
    p.id = static_cast<int64_t>(v + 1);
    p.lane0 = static_cast<int>(v % static_cast<size_t>(spec.n_lanes)) + 1;
    p.speed = lane_speed[p.lane0 - 1];
    if (spec.speed_jitter > 0.0) p.speed += rng.uniform(-spec.speed_jitter, spec.speed_jitter);
    p.x0 = (static_cast<double>(p.lane0) - 0.5) * spec.lane_width;
    if (spec.lateral_jitter > 0.0) p.x0 += rng.uniform(-spec.lateral_jitter, spec.lateral_jitter);
    const size_t entry_gap =
        static_cast<size_t>(std::ceil(spec.headway / (p.speed * kFramePeriod)));
    p.entry_frame = 1 + static_cast<size_t>(p.lane0 - 1) * spec.lane_stagger_frames +
                    per_lane[p.lane0 - 1] * entry_gap;
    ++per_lane[p.lane0 - 1];
    const double cls_draw = rng.next_double();
    p.cls = cls_draw < 0.05 ? VehicleClass::motorcycle
                            : (cls_draw < 0.15 ? VehicleClass::truck : VehicleClass::car);
    p.change_duration = spec.lane_change_frames;
    const size_t crossing = static_cast<size_t>(spec.road_length / (p.speed * kFramePeriod));
    if (v < n_changers && crossing > 2 * p.change_duration) {
      p.changes_lane = true;
      p.lane_dir = p.lane0 == 1 ? 1 : (p.lane0 == spec.n_lanes ? -1 : (rng.next_below(2) ? 1 : -1));
      p.change_frame =
          p.entry_frame + crossing / 3 + rng.next_below(std::max<size_t>(crossing / 3, 1));
    }
    plans.push_back(p);
  }

  struct State {
    double x = 0, y = 0;
    int lane = 0;
    bool on_road = false;
  };
  std::vector<std::vector<State>> states(plans.size(),
                                         std::vector<State>(spec.n_frames + 1));
  for (size_t v = 0; v < plans.size(); ++v) {
    const Plan& p = plans[v];
    for (size_t t = p.entry_frame; t <= spec.n_frames; ++t) {
      double y = 0.5 + p.speed * kFramePeriod * static_cast<double>(t - p.entry_frame);
      if (y > spec.road_length) break;
      double x = p.x0;
      if (p.changes_lane) {
        const double u = (static_cast<double>(t) - static_cast<double>(p.change_frame)) /
                         static_cast<double>(p.change_duration);
        x += static_cast<double>(p.lane_dir) * spec.lane_width * detail::smoothstep01(u);
      }
      if (spec.position_noise > 0.0) {
        x += rng.uniform(-spec.position_noise, spec.position_noise);
        y += rng.uniform(-spec.position_noise, spec.position_noise);
      }
      State& s = states[v][t];
      s.x = std::max(x, 0.0);
      s.y = std::max(y, 0.0);
      s.lane = std::clamp(static_cast<int>(s.x / spec.lane_width) + 1, 1, spec.n_lanes);
      s.on_road = true;
    }
  }

  std::vector<TrajectoryRecord> records;
  for (size_t t = 1; t <= spec.n_frames; ++t) {
    for (size_t v = 0; v < plans.size(); ++v) {
      if (!states[v][t].on_road) continue;
      TrajectoryRecord r;
      r.vehicle_id = plans[v].id;
      r.frame_id = static_cast<int64_t>(t);
      r.local_x = states[v][t].x;
      r.local_y = states[v][t].y;
      r.lane_id = states[v][t].lane;
      r.vehicle_class = plans[v].cls;

      double best_ahead = 0.0, best_behind = 0.0;
      for (size_t u = 0; u < plans.size(); ++u) {
        if (u == v || !states[u][t].on_road || states[u][t].lane != states[v][t].lane) continue;
        const double dy = states[u][t].y - states[v][t].y;
        if (dy > 0.0 && (!r.preceding_id || dy < best_ahead)) {
          r.preceding_id = plans[u].id;
          best_ahead = dy;
        }
        if (dy < 0.0 && (!r.following_id || -dy < best_behind)) {
          r.following_id = plans[u].id;
          best_behind = -dy;
        }
      }
      records.push_back(r);
    }
  }
  return records;
}

// Writes records in the classic 18-column trajectory layout (positions in
// feet), so the ingest stage consumes them exactly like the real data.
inline void write_raw_ngsim(std::ostream& out, const std::vector<TrajectoryRecord>& records) {
  char buf[512];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf),
                  "%lld %lld 0 0 %.6f %.6f 0 0 0 0 %d 0 0 %d %lld %lld 0 0\n",
                  static_cast<long long>(r.vehicle_id), static_cast<long long>(r.frame_id),
                  r.local_x / kFeetToMeters, r.local_y / kFeetToMeters,
                  class_to_ngsim(r.vehicle_class), r.lane_id,
                  static_cast<long long>(r.preceding_id.value_or(0)),
                  static_cast<long long>(r.following_id.value_or(0)));
    out << buf;
  }
}

}  // namespace trajcast
