#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "trajcast/core/error.hpp"
#include "trajcast/ngsim/records.hpp"

namespace trajcast {

// A 100-step window plus smoothing margins cannot fit in anything shorter.
constexpr size_t kMinSegmentFrames = 120;

// Contiguous segments per vehicle. A vehicle whose recording has frame
// gaps contributes one entry per gap-free run; segments never overlap in
// frames.
using TrackMap = std::map<int64_t, std::vector<VehicleTrack>>;

// Groups records by vehicle, sorts by frame, splits at frame gaps and
// drops segments shorter than min_segment_frames. Gaps are never
// interpolated: fabricated samples would bias the filter and the future
// targets. Duplicate (vehicle, frame) pairs and class flips within one
// vehicle are rejected.
inline TrackMap build_tracks(const std::vector<TrajectoryRecord>& records,
                             size_t min_segment_frames = kMinSegmentFrames) {
  std::map<int64_t, std::vector<TrajectoryRecord>> by_vehicle;
  for (const auto& r : records) by_vehicle[r.vehicle_id].push_back(r);

  TrackMap out;
  for (auto& [vid, recs] : by_vehicle) {
    std::stable_sort(recs.begin(), recs.end(),
                     [](const TrajectoryRecord& a, const TrajectoryRecord& b) {
                       return a.frame_id < b.frame_id;
                     });
    for (size_t i = 1; i < recs.size(); ++i) {
      if (recs[i].frame_id == recs[i - 1].frame_id)
        throw data_error("vehicle " + std::to_string(vid) + ": duplicate frame " +
                         std::to_string(recs[i].frame_id));
      if (recs[i].vehicle_class != recs[0].vehicle_class)
        throw data_error("vehicle " + std::to_string(vid) + ": vehicle_class changes mid-track");
    }

    std::vector<VehicleTrack> segments;
    VehicleTrack cur;
    cur.vehicle_id = vid;
    for (const auto& r : recs) {
      if (!cur.records.empty() && r.frame_id != cur.records.back().frame_id + 1) {
        segments.push_back(std::move(cur));
        cur = VehicleTrack{};
        cur.vehicle_id = vid;
      }
      cur.records.push_back(r);
    }
    if (!cur.records.empty()) segments.push_back(std::move(cur));

    std::vector<VehicleTrack> kept;
    for (auto& s : segments)
      if (s.records.size() >= min_segment_frames) kept.push_back(std::move(s));
    if (!kept.empty()) out.emplace(vid, std::move(kept));
  }
  return out;
}

inline size_t total_records(const TrackMap& tracks) {
  size_t n = 0;
  for (const auto& [vid, segs] : tracks)
    for (const auto& s : segs) n += s.records.size();
  return n;
}

}  // namespace trajcast
