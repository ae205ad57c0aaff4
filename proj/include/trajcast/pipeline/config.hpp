#pragma once

#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "trajcast/core/error.hpp"
#include "trajcast/data/scaling.hpp"
#include "trajcast/data/targets.hpp"
#include "trajcast/filter/savgol.hpp"
#include "trajcast/ngsim/records.hpp"
#include "trajcast/synth/generator.hpp"
#include "trajcast/train/trainer.hpp"

namespace trajcast {

// Minimal INI reader: [section] headers, key = value lines, '#' comments.
class IniFile {
public:
  IniFile() = default;

  static IniFile parse(std::istream& in) {
    IniFile f;
    std::string line, section;
    size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      if (trimmed.front() == '[') {
        if (trimmed.back() != ']') throw parse_error(line_no, "unterminated section header");
        section = trim(trimmed.substr(1, trimmed.size() - 2));
        continue;
      }
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos) throw parse_error(line_no, "expected key = value");
      f.values_[section + "." + trim(trimmed.substr(0, eq))] = trim(trimmed.substr(eq + 1));
    }
    return f;
  }

  static IniFile parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open config file '" + path + "'");
    return parse(in);
  }

  bool has(const std::string& section, const std::string& key) const {
    return values_.count(section + "." + key) > 0;
  }
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback = "") const {
    auto it = values_.find(section + "." + key);
    return it == values_.end() ? fallback : it->second;
  }
  double get_double(const std::string& section, const std::string& key, double fallback) const {
    auto it = values_.find(section + "." + key);
    return it == values_.end() ? fallback : std::stod(it->second);
  }
  int64_t get_int(const std::string& section, const std::string& key, int64_t fallback) const {
    auto it = values_.find(section + "." + key);
    return it == values_.end() ? fallback : std::stoll(it->second);
  }
  uint64_t get_uint(const std::string& section, const std::string& key, uint64_t fallback) const {
    auto it = values_.find(section + "." + key);
    return it == values_.end() ? fallback : std::stoull(it->second);
  }
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const {
    auto it = values_.find(section + "." + key);
    if (it == values_.end()) return fallback;
    return it->second == "1" || it->second == "true" || it->second == "yes";
  }
  std::vector<int> get_int_list(const std::string& section, const std::string& key,
                                std::vector<int> fallback) const {
    auto it = values_.find(section + "." + key);
    if (it == values_.end()) return fallback;
    std::vector<int> out;
    std::istringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(trim(tok)));
    return out;
  }

private:
  static std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
    return s.substr(b, e - b);
  }

  std::map<std::string, std::string> values_;
};

// Everything one experiment needs; one config file per experiment, all
// seeds explicit. Flag overrides are handled by the CLI on top of this.
struct RunConfig {
  // paths (relative paths are resolved against data_root by the CLI)
  std::string raw_path = "data/raw.txt";
  std::string tracks_path = "out/tracks.csv";
  std::string features_path = "out/features.csv";
  std::string windows_path = "out/windows.twa";
  std::string checkpoint_dir = "out/ckpt";
  std::string report_dir = "out/report";
  std::string history_path = "out/history.csv";

  ColumnMap columns;
  FilterSpec filter;
  ScalingSpec scaling;
  HorizonSpec horizons;

  std::string variant = "reference";
  size_t lstm_units_override = 0;   // 0 = keep the variant's width
  size_t dense_units_override = 0;

  TrainSchedule schedule;
  double split_ratio = 0.8;
  uint64_t split_seed = 7;

  SynthSpec synth;
};

inline RunConfig run_config_from_ini(const IniFile& ini) {
  RunConfig c;
  c.raw_path = ini.get("paths", "raw", c.raw_path);
  c.tracks_path = ini.get("paths", "tracks", c.tracks_path);
  c.features_path = ini.get("paths", "features", c.features_path);
  c.windows_path = ini.get("paths", "windows", c.windows_path);
  c.checkpoint_dir = ini.get("paths", "checkpoint_dir", c.checkpoint_dir);
  c.report_dir = ini.get("paths", "report_dir", c.report_dir);
  c.history_path = ini.get("paths", "history", c.history_path);

  c.columns.vehicle_id = static_cast<int>(ini.get_int("columns", "vehicle_id", c.columns.vehicle_id));
  c.columns.frame_id = static_cast<int>(ini.get_int("columns", "frame_id", c.columns.frame_id));
  c.columns.local_x = static_cast<int>(ini.get_int("columns", "local_x", c.columns.local_x));
  c.columns.local_y = static_cast<int>(ini.get_int("columns", "local_y", c.columns.local_y));
  c.columns.vehicle_class =
      static_cast<int>(ini.get_int("columns", "vehicle_class", c.columns.vehicle_class));
  c.columns.lane_id = static_cast<int>(ini.get_int("columns", "lane_id", c.columns.lane_id));
  c.columns.preceding = static_cast<int>(ini.get_int("columns", "preceding", c.columns.preceding));
  c.columns.following = static_cast<int>(ini.get_int("columns", "following", c.columns.following));
  c.columns.has_header = ini.get_bool("columns", "has_header", c.columns.has_header);

  c.filter.window_length = static_cast<size_t>(ini.get_int("filter", "window_length", 11));
  c.filter.polynomial_order = static_cast<int>(ini.get_int("filter", "poly_order", 1));
  c.filter.sample_period = ini.get_double("filter", "sample_period", 0.1);

  c.scaling.distance_divisor = ini.get_double("scaling", "distance_divisor", 10.0);
  c.scaling.long_velocity_divisor = ini.get_double("scaling", "long_velocity_divisor", 10.0);
  c.scaling.ttc_divisor = ini.get_double("scaling", "ttc_divisor", 10.0);
  c.scaling.lateral_velocity_divisor = ini.get_double("scaling", "lateral_velocity_divisor", 1.0);

  c.horizons.horizons_s = ini.get_int_list("horizons", "seconds", c.horizons.horizons_s);

  c.variant = ini.get("model", "variant", c.variant);
  c.lstm_units_override = static_cast<size_t>(ini.get_int("model", "lstm_units", 0));
  c.dense_units_override = static_cast<size_t>(ini.get_int("model", "dense_units", 0));

  c.schedule.group_size = static_cast<size_t>(ini.get_int("schedule", "group_size", 500));
  c.schedule.epochs_per_group = static_cast<size_t>(ini.get_int("schedule", "epochs_per_group", 5));
  c.schedule.full_passes = static_cast<size_t>(ini.get_int("schedule", "full_passes", 20));
  c.schedule.minibatch_size = static_cast<size_t>(ini.get_int("schedule", "minibatch", 32));
  c.schedule.learning_rate = ini.get_double("schedule", "learning_rate", 1e-3);
  c.schedule.seed = ini.get_uint("schedule", "seed", 42);

  c.split_ratio = ini.get_double("split", "ratio", 0.8);
  c.split_seed = ini.get_uint("split", "seed", 7);

  c.synth.n_vehicles = static_cast<size_t>(ini.get_int("synth", "vehicles", 20));
  c.synth.lane_change_fraction = ini.get_double("synth", "lane_change_fraction", 0.2);
  c.synth.n_frames = static_cast<size_t>(ini.get_int("synth", "frames", 900));
  c.synth.n_lanes = static_cast<int>(ini.get_int("synth", "lanes", 5));
  c.synth.road_length = ini.get_double("synth", "road_length", 500.0);
  c.synth.min_speed = ini.get_double("synth", "min_speed", 10.0);
  c.synth.max_speed = ini.get_double("synth", "max_speed", 20.0);
  c.synth.headway = ini.get_double("synth", "headway", 60.0);
  c.synth.lane_stagger_frames =
      static_cast<size_t>(ini.get_int("synth", "lane_stagger_frames", 0));
  c.synth.lane_change_frames =
      static_cast<size_t>(ini.get_int("synth", "lane_change_frames", 40));
  c.synth.lateral_jitter = ini.get_double("synth", "lateral_jitter", 0.0);
  c.synth.speed_jitter = ini.get_double("synth", "speed_jitter", 0.0);
  c.synth.position_noise = ini.get_double("synth", "position_noise", 0.0);
  c.synth.seed = ini.get_uint("synth", "seed", 1);
  return c;
}

}  // namespace trajcast
