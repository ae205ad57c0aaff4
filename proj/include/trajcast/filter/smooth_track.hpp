#pragma once

#include "trajcast/filter/savgol.hpp"
#include "trajcast/ngsim/records.hpp"

namespace trajcast {

// Smooths positions and derives velocities for one track. Velocities come
// from a single derivative pass over the *raw* positions; differentiating
// already-smoothed data would over-smooth. The source's own velocity
// column, where present, is ignored.
inline SmoothedTrack smooth_track(const VehicleTrack& track, const FilterSpec& spec) {
  Vec raw_x(track.records.size()), raw_y(track.records.size());
  for (size_t i = 0; i < track.records.size(); ++i) {
    raw_x[i] = track.records[i].local_x;
    raw_y[i] = track.records[i].local_y;
  }
  SmoothedTrack out;
  out.vehicle_id = track.vehicle_id;
  out.frame_ids.reserve(track.records.size());
  for (const auto& r : track.records) out.frame_ids.push_back(r.frame_id);
  out.x = savgol_smooth(raw_x, spec);
  out.y = savgol_smooth(raw_y, spec);
  out.vx = savgol_derivative(raw_x, spec);
  out.vy = savgol_derivative(raw_y, spec);
  return out;
}

}  // namespace trajcast
