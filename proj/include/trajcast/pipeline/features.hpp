#pragma once

#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "trajcast/core/error.hpp"
#include "trajcast/data/scaling.hpp"
#include "trajcast/data/targets.hpp"
#include "trajcast/data/windows.hpp"
#include "trajcast/ngsim/parse.hpp"
#include "trajcast/ngsim/tracks.hpp"
#include "trajcast/scene/neighborhood.hpp"

namespace trajcast {

// One featurized trajectory segment: scaled input rows plus scaled
// multi-horizon targets (rows without an observed future are flagged).
struct VehicleFeatures {
  int64_t vehicle_id = 0;
  std::vector<int64_t> frames;
  Mat features;                      // T x N
  Mat targets;                       // T x 2K, zero where absent
  std::vector<char> target_present;  // per row
};

inline std::vector<PreparedTrack> prepare_all(const TrackMap& tracks, const FilterSpec& filter) {
  std::vector<PreparedTrack> out;
  for (const auto& [vid, segments] : tracks)
    for (const auto& seg : segments) out.push_back(prepare_track(seg, filter));
  return out;
}

// Runs neighbor identification, feature extraction, scaling and target
// construction over every prepared segment.
inline std::vector<VehicleFeatures> featurize_tracks(const std::vector<PreparedTrack>& tracks,
                                                     const FeatureConfig& feature_cfg,
                                                     const ScalingSpec& scaling,
                                                     const HorizonSpec& horizons) {
  scaling.validate();
  horizons.validate();
  const SceneIndex index = build_scene_index(tracks);
  const size_t width = feature_width(feature_cfg);
  const size_t out_width = horizons.output_size();

  std::vector<VehicleFeatures> out;
  out.reserve(tracks.size());
  for (const auto& t : tracks) {
    VehicleFeatures vf;
    vf.vehicle_id = t.vehicle_id();
    vf.frames = t.smoothed.frame_ids;
    vf.features = Mat(t.size(), width);
    vf.targets = Mat(t.size(), out_width);
    vf.target_present.assign(t.size(), 0);

    const auto targets = compute_targets(t.smoothed, horizons, scaling);
    for (size_t i = 0; i < t.size(); ++i) {
      const int64_t frame = t.smoothed.frame_ids[i];
      const FrameScene* scene = index.find(frame);
      const VehicleState* state = scene ? scene->find(t.vehicle_id()) : nullptr;
      if (!state) throw data_error("featurize: missing scene state (internal)");
      const NeighborSet neighbors = find_neighbors(t.vehicle_id(), frame, index);
      const FeatureFrame frame_features = extract_features(*state, neighbors, *scene, feature_cfg);
      const Vec scaled = scale_features(frame_features, scaling, feature_cfg);
      std::copy(scaled.begin(), scaled.end(), vf.features.row(i));
      if (targets[i]) {
        std::copy(targets[i]->begin(), targets[i]->end(), vf.targets.row(i));
        vf.target_present[i] = 1;
      }
    }
    out.push_back(std::move(vf));
  }
  return out;
}

inline std::vector<Window> windows_from_features(const VehicleFeatures& vf,
                                                 size_t length = kWindowLength,
                                                 size_t stride = kWindowStride) {
  std::vector<Vec> rows(vf.features.rows);
  std::vector<std::optional<TargetFrame>> targets(vf.features.rows);
  for (size_t i = 0; i < vf.features.rows; ++i) {
    rows[i].assign(vf.features.row(i), vf.features.row(i) + vf.features.cols);
    if (vf.target_present[i])
      targets[i] = TargetFrame(vf.targets.row(i), vf.targets.row(i) + vf.targets.cols);
  }
  return make_windows(vf.vehicle_id, vf.frames, rows, targets, length, stride);
}

// --- feature dump CSV ----------------------------------------------------
//
// Golden interchange format between the pipeline stages: one row per
// (vehicle, frame), scaled units, 17 significant digits so values
// round-trip bit-for-bit. Column order: vehicle_id, frame_id, the feature
// columns of feature_names(), target_present, then x_h<k>,vy_h<k> pairs.

inline void write_feature_dump(std::ostream& out, const std::vector<VehicleFeatures>& data,
                               const FeatureConfig& cfg, const HorizonSpec& horizons) {
  out << "vehicle_id,frame_id";
  for (const auto& n : feature_names(cfg)) out << ',' << n;
  out << ",target_present";
  for (int h : horizons.horizons_s) out << ",x_h" << h << ",vy_h" << h;
  out << '\n';
  char buf[64];
  for (const auto& vf : data) {
    for (size_t i = 0; i < vf.features.rows; ++i) {
      out << vf.vehicle_id << ',' << vf.frames[i];
      for (size_t j = 0; j < vf.features.cols; ++j) {
        std::snprintf(buf, sizeof(buf), ",%.17g", vf.features(i, j));
        out << buf;
      }
      out << ',' << (vf.target_present[i] ? 1 : 0);
      for (size_t j = 0; j < vf.targets.cols; ++j) {
        std::snprintf(buf, sizeof(buf), ",%.17g", vf.target_present[i] ? vf.targets(i, j) : 0.0);
        out << buf;
      }
      out << '\n';
    }
  }
}

struct FeatureDump {
  std::vector<VehicleFeatures> data;  // one entry per gap-free segment
  size_t n_features = 0;
  std::vector<int> horizons_s;
};

// Rows are grouped by vehicle and split into segments at frame gaps, so a
// reread dump behaves exactly like the in-memory pipeline output.
inline FeatureDump read_feature_dump(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw data_error("empty feature dump");
  std::vector<std::string> names;
  {
    std::istringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) names.push_back(tok);
  }
  if (names.size() < 4 || names[0] != "vehicle_id" || names[1] != "frame_id")
    throw data_error("feature dump: unrecognized header");
  size_t present_col = 0;
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == "target_present") present_col = i;
  if (present_col == 0) throw data_error("feature dump: missing target_present column");

  FeatureDump dump;
  dump.n_features = present_col - 2;
  for (size_t i = present_col + 1; i < names.size(); i += 2) {
    if (names[i].rfind("x_h", 0) != 0)
      throw data_error("feature dump: unexpected target column '" + names[i] + "'");
    try {
      dump.horizons_s.push_back(std::stoi(names[i].substr(3)));
    } catch (const std::logic_error&) {
      throw data_error("feature dump: malformed target column '" + names[i] + "'");
    }
  }
  {
    HorizonSpec check;
    check.horizons_s = dump.horizons_s;
    try {
      check.validate();
    } catch (const std::invalid_argument& e) {
      throw data_error(std::string("feature dump: ") + e.what());
    }
  }
  const size_t n_targets = 2 * dump.horizons_s.size();
  const size_t expect = 3 + dump.n_features + n_targets;

  // ordered by first appearance of each vehicle
  std::map<int64_t, size_t> first_segment;
  std::vector<VehicleFeatures> raw;
  std::vector<std::vector<Vec>> feat_rows, target_rows;
  std::vector<std::vector<char>> present_rows;

  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tok;
    std::vector<double> vals;
    vals.reserve(expect);
    while (std::getline(ss, tok, ',')) vals.push_back(detail::parse_double(tok, line_no, "value"));
    if (vals.size() != expect)
      throw parse_error(line_no, "expected " + std::to_string(expect) + " columns, got " +
                                     std::to_string(vals.size()));
    const int64_t vid = static_cast<int64_t>(vals[0]);
    const int64_t frame = static_cast<int64_t>(vals[1]);

    bool new_segment = true;
    size_t seg = 0;
    if (auto it = first_segment.find(vid); it != first_segment.end()) {
      seg = it->second;
      if (!raw[seg].frames.empty() && frame == raw[seg].frames.back() + 1) new_segment = false;
    }
    if (new_segment) {
      raw.emplace_back();
      feat_rows.emplace_back();
      target_rows.emplace_back();
      present_rows.emplace_back();
      seg = raw.size() - 1;
      raw[seg].vehicle_id = vid;
      first_segment[vid] = seg;
    }
    raw[seg].frames.push_back(frame);
    feat_rows[seg].emplace_back(vals.begin() + 2, vals.begin() + 2 + dump.n_features);
    present_rows[seg].push_back(vals[2 + dump.n_features] != 0.0 ? 1 : 0);
    target_rows[seg].emplace_back(vals.begin() + 3 + dump.n_features, vals.end());
  }

  for (size_t s = 0; s < raw.size(); ++s) {
    VehicleFeatures& vf = raw[s];
    const size_t n = vf.frames.size();
    vf.features = Mat(n, dump.n_features);
    vf.targets = Mat(n, n_targets);
    vf.target_present = present_rows[s];
    for (size_t i = 0; i < n; ++i) {
      std::copy(feat_rows[s][i].begin(), feat_rows[s][i].end(), vf.features.row(i));
      std::copy(target_rows[s][i].begin(), target_rows[s][i].end(), vf.targets.row(i));
    }
  }
  dump.data = std::move(raw);
  return dump;
}

}  // namespace trajcast
