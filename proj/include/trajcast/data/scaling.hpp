#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "trajcast/core/mat.hpp"
#include "trajcast/scene/neighborhood.hpp"

namespace trajcast {

// Divisors that bring the features into the activation-friendly range.
// Distances, longitudinal velocities (absolute and relative) and TTC are
// divided by 10; lateral velocities and the type codes are already small
// and stay unscaled.
struct ScalingSpec {
  double distance_divisor = 10.0;
  double long_velocity_divisor = 10.0;
  double ttc_divisor = 10.0;
  double lateral_velocity_divisor = 1.0;

  void validate() const {
    if (distance_divisor <= 0 || long_velocity_divisor <= 0 || ttc_divisor <= 0 ||
        lateral_velocity_divisor <= 0)
      throw std::invalid_argument("ScalingSpec: divisors must be positive");
  }
};

// Which divisor applies to each slot of the flattened feature vector.
enum class FeatureKind { distance, long_velocity, lateral_velocity, ttc, type };

inline double divisor_for(FeatureKind k, const ScalingSpec& s) {
  switch (k) {
    case FeatureKind::distance: return s.distance_divisor;
    case FeatureKind::long_velocity: return s.long_velocity_divisor;
    case FeatureKind::lateral_velocity: return s.lateral_velocity_divisor;
    case FeatureKind::ttc: return s.ttc_divisor;
    case FeatureKind::type: return 1.0;
  }
  return 1.0;
}

inline size_t roles_in_layout(const FeatureConfig& cfg) { return cfg.use_ff ? 9 : 8; }

inline size_t feature_width(const FeatureConfig& cfg) {
  const size_t per_target = 4 + (cfg.use_type ? 1 : 0);
  const size_t per_role = 5 + (cfg.use_type ? 1 : 0);
  return per_target + roles_in_layout(cfg) * per_role;
}

// Kind of each slot, in vector order: target block first (x, y, vx, vy
// [, type]) and then one block per role (vx, dvy, dx, dy, ttc [, type]).
// When use_ff is off the ff block is omitted entirely.
inline std::vector<FeatureKind> feature_kinds(const FeatureConfig& cfg) {
  std::vector<FeatureKind> kinds;
  kinds.reserve(feature_width(cfg));
  kinds.push_back(FeatureKind::distance);          // x_targ
  kinds.push_back(FeatureKind::distance);          // y_targ
  kinds.push_back(FeatureKind::lateral_velocity);  // vx_targ
  kinds.push_back(FeatureKind::long_velocity);     // vy_targ
  if (cfg.use_type) kinds.push_back(FeatureKind::type);
  for (size_t p = 0; p < roles_in_layout(cfg); ++p) {
    kinds.push_back(FeatureKind::lateral_velocity);  // vx_p
    kinds.push_back(FeatureKind::long_velocity);     // dvy_p
    kinds.push_back(FeatureKind::distance);          // dx_p
    kinds.push_back(FeatureKind::distance);          // dy_p
    kinds.push_back(FeatureKind::ttc);               // ttc_p
    if (cfg.use_type) kinds.push_back(FeatureKind::type);
  }
  return kinds;
}

// Column names matching feature_kinds, used by the feature dump header.
inline std::vector<std::string> feature_names(const FeatureConfig& cfg) {
  std::vector<std::string> names = {"x_targ", "y_targ", "vx_targ", "vy_targ"};
  if (cfg.use_type) names.push_back("type_targ");
  for (size_t p = 0; p < roles_in_layout(cfg); ++p) {
    const std::string r = role_name(static_cast<NeighborRole>(p));
    names.push_back("vx_" + r);
    names.push_back("dvy_" + r);
    names.push_back("dx_" + r);
    names.push_back("dy_" + r);
    names.push_back("ttc_" + r);
    if (cfg.use_type) names.push_back("type_" + r);
  }
  return names;
}

// Unscaled flat vector in the documented order.
inline Vec flatten_features(const FeatureFrame& f, const FeatureConfig& cfg) {
  Vec v;
  v.reserve(feature_width(cfg));
  v.push_back(f.x);
  v.push_back(f.y);
  v.push_back(f.vx);
  v.push_back(f.vy);
  if (cfg.use_type) v.push_back(f.type);
  for (size_t p = 0; p < roles_in_layout(cfg); ++p) {
    const RoleFeatures& rf = f.roles[p];
    v.push_back(rf.vx);
    v.push_back(rf.dvy);
    v.push_back(rf.dx);
    v.push_back(rf.dy);
    v.push_back(rf.ttc);
    if (cfg.use_type) v.push_back(rf.type);
  }
  return v;
}

inline void scale_in_place(Vec& v, const ScalingSpec& s, const FeatureConfig& cfg) {
  const auto kinds = feature_kinds(cfg);
  for (size_t i = 0; i < v.size(); ++i) v[i] /= divisor_for(kinds[i], s);
}

inline void unscale_in_place(Vec& v, const ScalingSpec& s, const FeatureConfig& cfg) {
  const auto kinds = feature_kinds(cfg);
  for (size_t i = 0; i < v.size(); ++i) v[i] *= divisor_for(kinds[i], s);
}

// The network input vector for one frame.
inline Vec scale_features(const FeatureFrame& f, const ScalingSpec& s,
                          const FeatureConfig& cfg = {}) {
  Vec v = flatten_features(f, cfg);
  scale_in_place(v, s, cfg);
  return v;
}

}  // namespace trajcast
