#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "trajcast/core/error.hpp"
#include "trajcast/core/rng.hpp"

namespace trajcast {

// Train/test partition by vehicle. Windows never decide membership: a
// vehicle's data is entirely in one side or the other.
struct DatasetSplit {
  std::vector<int64_t> train_vehicle_ids;  // sorted
  std::vector<int64_t> test_vehicle_ids;   // sorted
  uint64_t seed = 0;
};

inline DatasetSplit split_train_test(std::vector<int64_t> vehicle_ids, double ratio,
                                     uint64_t seed) {
  if (vehicle_ids.empty()) throw data_error("split_train_test: empty vehicle id set");
  std::sort(vehicle_ids.begin(), vehicle_ids.end());
  vehicle_ids.erase(std::unique(vehicle_ids.begin(), vehicle_ids.end()), vehicle_ids.end());
  Rng rng(seed);
  rng.shuffle(vehicle_ids);
  const size_t n_train = static_cast<size_t>(ratio * static_cast<double>(vehicle_ids.size()));
  DatasetSplit s;
  s.seed = seed;
  s.train_vehicle_ids.assign(vehicle_ids.begin(), vehicle_ids.begin() + n_train);
  s.test_vehicle_ids.assign(vehicle_ids.begin() + n_train, vehicle_ids.end());
  std::sort(s.train_vehicle_ids.begin(), s.train_vehicle_ids.end());
  std::sort(s.test_vehicle_ids.begin(), s.test_vehicle_ids.end());
  return s;
}

// Chunks the (seeded-shuffled) training vehicles into groups; the last
// group may be smaller. Window order within a group is shuffled later by
// the training driver, once per epoch.
inline std::vector<std::vector<int64_t>> make_vehicle_groups(std::vector<int64_t> train_ids,
                                                             size_t group_size, uint64_t seed) {
  std::vector<std::vector<int64_t>> groups;
  if (train_ids.empty() || group_size == 0) return groups;
  Rng rng(seed);
  rng.shuffle(train_ids);
  for (size_t i = 0; i < train_ids.size(); i += group_size) {
    const size_t end = std::min(i + group_size, train_ids.size());
    groups.emplace_back(train_ids.begin() + i, train_ids.begin() + end);
  }
  return groups;
}

}  // namespace trajcast
