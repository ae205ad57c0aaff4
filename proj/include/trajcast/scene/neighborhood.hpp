#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "trajcast/core/error.hpp"
#include "trajcast/filter/smooth_track.hpp"
#include "trajcast/ngsim/records.hpp"

namespace trajcast {

// The 9 vehicles of interest around a target: left/right nearest in the
// adjacent lanes, the leader chain f -> ff, and the three followers whose
// leader is l / targ / r.
enum class NeighborRole : int { l = 0, r, f, b, fl, fr, bl, br, ff };

constexpr size_t kNumRoles = 9;

inline const char* role_name(NeighborRole p) {
  static const char* names[kNumRoles] = {"l", "r", "f", "b", "fl", "fr", "bl", "br", "ff"};
  return names[static_cast<int>(p)];
}

struct NeighborSet {
  std::array<std::optional<int64_t>, kNumRoles> ids{};

  std::optional<int64_t>& operator[](NeighborRole p) { return ids[static_cast<size_t>(p)]; }
  const std::optional<int64_t>& operator[](NeighborRole p) const {
    return ids[static_cast<size_t>(p)];
  }
};

// One vehicle's raw track joined with its smoothed kinematics; the unit
// the scene index and the feature pipeline work on.
struct PreparedTrack {
  SmoothedTrack smoothed;
  std::vector<int> lanes;
  std::vector<std::optional<int64_t>> preceding;
  double type_code = 0.0;

  int64_t vehicle_id() const { return smoothed.vehicle_id; }
  size_t size() const { return smoothed.size(); }
};

inline PreparedTrack prepare_track(const VehicleTrack& track, const FilterSpec& spec) {
  PreparedTrack out;
  out.smoothed = smooth_track(track, spec);
  out.lanes.reserve(track.size());
  out.preceding.reserve(track.size());
  for (const auto& r : track.records) {
    out.lanes.push_back(r.lane_id);
    out.preceding.push_back(r.preceding_id);
  }
  out.type_code = class_code(track.records.front().vehicle_class);
  return out;
}

// Smoothed state of one vehicle at one frame.
struct VehicleState {
  int64_t vehicle_id = 0;
  int lane_id = 0;
  double x = 0, y = 0, vx = 0, vy = 0;
  double type_code = 0;
  std::optional<int64_t> preceding;
};

struct FrameScene {
  std::unordered_map<int64_t, VehicleState> states;
  std::map<int, std::vector<int64_t>> lanes;       // lane -> ids sorted by y
  std::unordered_map<int64_t, int64_t> follower;   // leader -> closest claimant

  const VehicleState* find(int64_t vid) const {
    auto it = states.find(vid);
    return it == states.end() ? nullptr : &it->second;
  }
};

struct SceneIndex {
  std::unordered_map<int64_t, FrameScene> frames;

  const FrameScene* find(int64_t frame_id) const {
    auto it = frames.find(frame_id);
    return it == frames.end() ? nullptr : &it->second;
  }
};

// Builds the per-frame lookup structure: lane lists sorted by longitudinal
// position, and the follower map obtained by inverting the preceding
// links. Several vehicles may claim the same leader during merges; the
// follower map then keeps the claimant closest in |dy| (ties to the lower
// id). A cycle in the preceding links is corrupt data and rejected.
inline SceneIndex build_scene_index(const std::vector<PreparedTrack>& tracks) {
  SceneIndex index;
  for (const auto& t : tracks) {
    for (size_t i = 0; i < t.size(); ++i) {
      VehicleState s;
      s.vehicle_id = t.vehicle_id();
      s.lane_id = t.lanes[i];
      s.x = t.smoothed.x[i];
      s.y = t.smoothed.y[i];
      s.vx = t.smoothed.vx[i];
      s.vy = t.smoothed.vy[i];
      s.type_code = t.type_code;
      s.preceding = t.preceding[i];
      index.frames[t.smoothed.frame_ids[i]].states.emplace(s.vehicle_id, s);
    }
  }

  for (auto& [frame_id, scene] : index.frames) {
    for (const auto& [vid, s] : scene.states) scene.lanes[s.lane_id].push_back(vid);
    for (auto& [lane, vids] : scene.lanes) {
      std::sort(vids.begin(), vids.end(), [&](int64_t a, int64_t b) {
        const double ya = scene.states.at(a).y, yb = scene.states.at(b).y;
        return ya != yb ? ya < yb : a < b;
      });
    }

    for (const auto& [vid, s] : scene.states) {
      if (!s.preceding) continue;
      const VehicleState* leader = scene.find(*s.preceding);
      if (!leader) continue;  // leader not recorded at this frame
      auto [it, inserted] = scene.follower.emplace(*s.preceding, vid);
      if (!inserted) {
        const double cur = std::abs(leader->y - scene.states.at(it->second).y);
        const double cand = std::abs(leader->y - s.y);
        if (cand < cur || (cand == cur && vid < it->second)) it->second = vid;
      }
    }

    // reject preceding-link cycles
    for (const auto& [vid, s] : scene.states) {
      int64_t cur = vid;
      size_t hops = 0;
      while (true) {
        const VehicleState* st = scene.find(cur);
        if (!st || !st->preceding) break;
        cur = *st->preceding;
        if (++hops > scene.states.size())
          throw data_error("cycle in preceding links at frame " + std::to_string(frame_id));
      }
    }
  }
  return index;
}

// Identifies the 9 vehicles of interest for a target at one frame.
// l and r are searched in the immediately adjacent lanes only, minimizing
// |dy| with ties broken toward the vehicle ahead and then the lower id.
// Every failed lookup (no such lane, dangling leader id, vehicle not
// recorded at the frame) yields an absent role.
inline NeighborSet find_neighbors(int64_t target_id, int64_t frame_id, const SceneIndex& index) {
  const FrameScene* scene = index.find(frame_id);
  const VehicleState* target = scene ? scene->find(target_id) : nullptr;
  if (!target)
    throw data_error("vehicle " + std::to_string(target_id) + " absent at frame " +
                     std::to_string(frame_id));

  NeighborSet out;

  auto closest_in_lane = [&](int lane) -> std::optional<int64_t> {
    auto it = scene->lanes.find(lane);
    if (it == scene->lanes.end()) return std::nullopt;
    std::optional<int64_t> best;
    double best_ady = 0.0;
    bool best_ahead = false;
    for (int64_t vid : it->second) {
      const VehicleState& s = scene->states.at(vid);
      const double dy = s.y - target->y;
      const double ady = std::abs(dy);
      const bool ahead = dy >= 0.0;
      bool better = false;
      if (!best) {
        better = true;
      } else if (ady != best_ady) {
        better = ady < best_ady;
      } else if (ahead != best_ahead) {
        better = ahead;
      } else {
        better = vid < *best;
      }
      if (better) {
        best = vid;
        best_ady = ady;
        best_ahead = ahead;
      }
    }
    return best;
  };

  auto leader_of = [&](const std::optional<int64_t>& vid) -> std::optional<int64_t> {
    if (!vid) return std::nullopt;
    const VehicleState* s = scene->find(*vid);
    if (!s || !s->preceding) return std::nullopt;
    if (!scene->find(*s->preceding)) return std::nullopt;
    return s->preceding;
  };

  auto follower_of = [&](const std::optional<int64_t>& vid) -> std::optional<int64_t> {
    if (!vid) return std::nullopt;
    auto it = scene->follower.find(*vid);
    if (it == scene->follower.end()) return std::nullopt;
    return it->second;
  };

  out[NeighborRole::l] = closest_in_lane(target->lane_id - 1);
  out[NeighborRole::r] = closest_in_lane(target->lane_id + 1);
  out[NeighborRole::f] = leader_of(target_id);
  out[NeighborRole::ff] = leader_of(out[NeighborRole::f]);
  out[NeighborRole::fl] = leader_of(out[NeighborRole::l]);
  out[NeighborRole::fr] = leader_of(out[NeighborRole::r]);
  out[NeighborRole::b] = follower_of(target_id);
  out[NeighborRole::bl] = follower_of(out[NeighborRole::l]);
  out[NeighborRole::br] = follower_of(out[NeighborRole::r]);
  return out;
}

// Signed time to collision dy/dvy, total by construction: outside a
// 0.01 m/s dead band the quotient is clamped to [-100, 100] s; inside it
// the result is sign(dy) * 100 (0 when dy is 0).
inline double compute_ttc(double dy, double dvy) {
  constexpr double kDeadBand = 0.01;   // m/s
  constexpr double kClamp = 100.0;     // s
  if (std::abs(dvy) >= kDeadBand) {
    const double q = dy / dvy;
    return std::clamp(q, -kClamp, kClamp);
  }
  if (dy == 0.0) return 0.0;
  return dy > 0.0 ? kClamp : -kClamp;
}

// Raw (unscaled) per-role feature block. Absent roles stay all-zero.
struct RoleFeatures {
  bool present = false;
  double vx = 0;    // lateral velocity of p, m/s
  double dvy = 0;   // vy_targ - vy_p, m/s
  double dx = 0;    // x_p - x_targ, m
  double dy = 0;    // y_p - y_targ, m
  double ttc = 0;   // s
  double type = 0;  // -1/0/+1
};

// Raw per-frame input vector: target block then the 9 role blocks in the
// fixed order l, r, f, b, fl, fr, bl, br, ff.
struct FeatureFrame {
  double x = 0, y = 0, vx = 0, vy = 0;
  double type = 0;
  std::array<RoleFeatures, kNumRoles> roles{};
};

struct FeatureConfig {
  bool use_type = false;  // include the -1/0/+1 class codes
  bool use_ff = true;     // include the leader-of-leader block
};

inline FeatureFrame extract_features(const VehicleState& target, const NeighborSet& neighbors,
                                     const FrameScene& scene, const FeatureConfig& cfg = {}) {
  FeatureFrame out;
  out.x = target.x;
  out.y = target.y;
  out.vx = target.vx;
  out.vy = target.vy;
  out.type = cfg.use_type ? target.type_code : 0.0;
  for (size_t p = 0; p < kNumRoles; ++p) {
    if (!neighbors.ids[p]) continue;
    const VehicleState* s = scene.find(*neighbors.ids[p]);
    if (!s) continue;  // no smoothed state here: treat as absent
    RoleFeatures& rf = out.roles[p];
    rf.present = true;
    rf.vx = s->vx;
    rf.dvy = target.vy - s->vy;
    rf.dx = s->x - target.x;
    rf.dy = s->y - target.y;
    rf.ttc = compute_ttc(rf.dy, rf.dvy);
    rf.type = cfg.use_type ? s->type_code : 0.0;
  }
  return out;
}

}  // namespace trajcast
