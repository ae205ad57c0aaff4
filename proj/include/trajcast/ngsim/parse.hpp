#pragma once

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "trajcast/core/error.hpp"
#include "trajcast/ngsim/records.hpp"

namespace trajcast {

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  const bool has_comma = line.find(',') != std::string_view::npos;
  size_t i = 0;
  while (i < line.size()) {
    if (has_comma) {
      size_t j = line.find(',', i);
      if (j == std::string_view::npos) j = line.size();
      std::string_view f = line.substr(i, j - i);
      while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
      while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.remove_suffix(1);
      out.push_back(f);
      i = j + 1;
    } else {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i >= line.size()) break;
      size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      out.push_back(line.substr(i, j - i));
      i = j;
    }
  }
  return out;
}

inline double parse_double(std::string_view f, size_t line_no, const char* field) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc() || p != f.data() + f.size())
    throw parse_error(line_no, std::string("non-numeric ") + field + " field '" + std::string(f) + "'");
  return v;
}

inline int64_t parse_int(std::string_view f, size_t line_no, const char* field) {
  // integer columns are sometimes exported as "12.0"
  const double v = parse_double(f, line_no, field);
  const int64_t i = static_cast<int64_t>(v);
  if (static_cast<double>(i) != v)
    throw parse_error(line_no, std::string("non-integer ") + field + " field '" + std::string(f) + "'");
  return i;
}

}  // namespace detail

// Parses delimiter-separated NGSIM-format text (comma or whitespace,
// auto-detected per line) into SI-unit records. Positions are converted
// from feet, class codes 1/2/3 decoded, and a preceding/following id of 0
// decoded as "absent". Blank lines are skipped.
inline std::vector<TrajectoryRecord> parse_trajectory_file(std::istream& in,
                                                           const ColumnMap& cols = {}) {
  std::vector<TrajectoryRecord> out;
  std::string line;
  size_t line_no = 0;
  const size_t need = static_cast<size_t>(cols.max_index()) + 1;
  bool header_pending = cols.has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    const auto fields = detail::split_fields(line);
    if (fields.size() < need)
      throw parse_error(line_no, "expected at least " + std::to_string(need) + " fields, got " +
                                     std::to_string(fields.size()));
    TrajectoryRecord r;
    r.vehicle_id = detail::parse_int(fields[cols.vehicle_id], line_no, "vehicle_id");
    r.frame_id = detail::parse_int(fields[cols.frame_id], line_no, "frame_id");
    if (r.vehicle_id <= 0) throw parse_error(line_no, "vehicle_id must be positive");
    if (r.frame_id <= 0) throw parse_error(line_no, "frame_id must be positive");
    r.local_x = detail::parse_double(fields[cols.local_x], line_no, "local_x") * kFeetToMeters;
    r.local_y = detail::parse_double(fields[cols.local_y], line_no, "local_y") * kFeetToMeters;
    if (r.local_x < 0.0 || r.local_y < 0.0)
      throw parse_error(line_no, "negative local coordinate");
    r.lane_id = static_cast<int>(detail::parse_int(fields[cols.lane_id], line_no, "lane_id"));
    if (r.lane_id <= 0) throw parse_error(line_no, "lane_id must be positive");
    const int64_t cls = detail::parse_int(fields[cols.vehicle_class], line_no, "vehicle_class");
    try {
      r.vehicle_class = class_from_ngsim(static_cast<int>(cls));
    } catch (const std::invalid_argument& e) {
      throw parse_error(line_no, e.what());
    }
    const int64_t prec = detail::parse_int(fields[cols.preceding], line_no, "preceding");
    if (prec != 0) r.preceding_id = prec;  // 0 is the documented "none" sentinel
    if (cols.following >= 0) {
      const int64_t foll = detail::parse_int(fields[cols.following], line_no, "following");
      if (foll != 0) r.following_id = foll;
    }
    if (r.preceding_id == r.vehicle_id || r.following_id == r.vehicle_id)
      throw parse_error(line_no, "vehicle listed as its own neighbor");
    out.push_back(r);
  }
  return out;
}

// --- normalized track dump ---------------------------------------------
//
// CSV in SI units with fixed column order; this is the exact interchange
// form, so floats are printed with 17 significant digits and round-trip
// bit-for-bit.

inline const char* kNormalizedHeader =
    "vehicle_id,frame_id,local_x_m,local_y_m,lane_id,class,preceding_id,following_id";

inline std::string serialize_record(const TrajectoryRecord& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%lld,%lld,%.17g,%.17g,%d,%d,%lld,%lld",
                static_cast<long long>(r.vehicle_id), static_cast<long long>(r.frame_id),
                r.local_x, r.local_y, r.lane_id, class_to_ngsim(r.vehicle_class),
                static_cast<long long>(r.preceding_id.value_or(0)),
                static_cast<long long>(r.following_id.value_or(0)));
  return buf;
}

inline TrajectoryRecord parse_normalized_row(std::string_view line, size_t line_no) {
  const auto f = detail::split_fields(line);
  if (f.size() != 8) throw parse_error(line_no, "expected 8 fields in normalized row");
  TrajectoryRecord r;
  r.vehicle_id = detail::parse_int(f[0], line_no, "vehicle_id");
  r.frame_id = detail::parse_int(f[1], line_no, "frame_id");
  r.local_x = detail::parse_double(f[2], line_no, "local_x_m");
  r.local_y = detail::parse_double(f[3], line_no, "local_y_m");
  r.lane_id = static_cast<int>(detail::parse_int(f[4], line_no, "lane_id"));
  try {
    r.vehicle_class = class_from_ngsim(static_cast<int>(detail::parse_int(f[5], line_no, "class")));
  } catch (const std::invalid_argument& e) {
    throw parse_error(line_no, e.what());
  }
  const int64_t prec = detail::parse_int(f[6], line_no, "preceding_id");
  if (prec != 0) r.preceding_id = prec;
  const int64_t foll = detail::parse_int(f[7], line_no, "following_id");
  if (foll != 0) r.following_id = foll;
  return r;
}

inline void write_normalized_dump(std::ostream& out, const std::vector<TrajectoryRecord>& records) {
  out << kNormalizedHeader << '\n';
  for (const auto& r : records) out << serialize_record(r) << '\n';
}

inline std::vector<TrajectoryRecord> read_normalized_dump(std::istream& in) {
  std::vector<TrajectoryRecord> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line == kNormalizedHeader) continue;
    out.push_back(parse_normalized_row(line, line_no));
  }
  return out;
}

}  // namespace trajcast
