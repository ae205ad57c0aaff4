#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace trajcast {

constexpr double kFeetToMeters = 0.3048;  // exact by definition
constexpr double kFramePeriod = 0.1;      // NGSIM records at 10 Hz

enum class VehicleClass { motorcycle, car, truck };

// Feature encoding used throughout: motorcycle -1, car 0, truck +1.
inline double class_code(VehicleClass c) {
  switch (c) {
    case VehicleClass::motorcycle: return -1.0;
    case VehicleClass::car: return 0.0;
    case VehicleClass::truck: return 1.0;
  }
  return 0.0;
}

// NGSIM source encoding 1/2/3.
inline VehicleClass class_from_ngsim(int code) {
  switch (code) {
    case 1: return VehicleClass::motorcycle;
    case 2: return VehicleClass::car;
    case 3: return VehicleClass::truck;
    default: throw std::invalid_argument("unknown vehicle class code " + std::to_string(code));
  }
}

inline int class_to_ngsim(VehicleClass c) {
  switch (c) {
    case VehicleClass::motorcycle: return 1;
    case VehicleClass::car: return 2;
    case VehicleClass::truck: return 3;
  }
  return 2;
}

// One row of trajectory data, already converted to SI units.
// local_x is lateral (from the leftmost road edge), local_y longitudinal.
struct TrajectoryRecord {
  int64_t vehicle_id = 0;
  int64_t frame_id = 0;
  double local_x = 0.0;  // m
  double local_y = 0.0;  // m
  int lane_id = 0;
  VehicleClass vehicle_class = VehicleClass::car;
  std::optional<int64_t> preceding_id;
  std::optional<int64_t> following_id;

  bool operator==(const TrajectoryRecord&) const = default;
};

// Source column indices (0-based) of each ingested field. Defaults follow
// the published NGSIM US-101 trajectory column dictionary. following is
// optional in some exports; set it to -1 when the column does not exist.
struct ColumnMap {
  int vehicle_id = 0;
  int frame_id = 1;
  int local_x = 4;
  int local_y = 5;
  int vehicle_class = 10;
  int lane_id = 13;
  int preceding = 14;
  int following = 15;
  bool has_header = false;

  int max_index() const {
    int m = vehicle_id;
    for (int i : {frame_id, local_x, local_y, vehicle_class, lane_id, preceding, following})
      if (i > m) m = i;
    return m;
  }
};

// One vehicle's contiguous, frame-sorted slice of records.
struct VehicleTrack {
  int64_t vehicle_id = 0;
  std::vector<TrajectoryRecord> records;  // frame_ids strictly increasing
  double frame_period = kFramePeriod;

  size_t size() const { return records.size(); }
};

}  // namespace trajcast
