#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "trajcast/core/error.hpp"
#include "trajcast/data/scaling.hpp"
#include "trajcast/data/targets.hpp"
#include "trajcast/data/windows.hpp"

namespace trajcast {

static_assert(std::endian::native == std::endian::little,
              "window archives are defined little-endian; big-endian hosts are unsupported");

// Window archive: a line-oriented text header terminated by "end_header",
// then raw little-endian binary per window:
//   int64 vehicle_id, int64 start_frame,
//   window_length * n_features doubles (inputs, row-major),
//   window_length * 2K doubles (targets, row-major).
// The byte layout is documented in docs/formats.md.
struct ArchiveHeader {
  size_t n_features = 0;
  HorizonSpec horizons;
  ScalingSpec scaling;
  uint64_t seed = 0;
  size_t window_length = kWindowLength;
  size_t window_count = 0;
};

inline constexpr const char* kArchiveMagic = "trajcast-windows v1";

namespace detail {

inline void write_raw(std::ostream& out, const void* p, size_t n) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

inline void read_raw(std::istream& in, void* p, size_t n, const char* what) {
  in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (static_cast<size_t>(in.gcount()) != n)
    throw data_error(std::string("truncated archive while reading ") + what);
}

inline std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::istringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

}  // namespace detail

inline void write_window_archive(std::ostream& out, const ArchiveHeader& header,
                                 const std::vector<Window>& windows) {
  out << kArchiveMagic << '\n';
  out << "n_features=" << header.n_features << '\n';
  out << "horizons_s=";
  for (size_t i = 0; i < header.horizons.horizons_s.size(); ++i)
    out << (i ? "," : "") << header.horizons.horizons_s[i];
  out << '\n';
  out << "distance_divisor=" << detail::fmt_g17(header.scaling.distance_divisor) << '\n';
  out << "long_velocity_divisor=" << detail::fmt_g17(header.scaling.long_velocity_divisor) << '\n';
  out << "ttc_divisor=" << detail::fmt_g17(header.scaling.ttc_divisor) << '\n';
  out << "lateral_velocity_divisor=" << detail::fmt_g17(header.scaling.lateral_velocity_divisor)
      << '\n';
  out << "seed=" << header.seed << '\n';
  out << "window_length=" << header.window_length << '\n';
  out << "window_count=" << windows.size() << '\n';
  out << "end_header\n";
  for (const auto& w : windows) {
    if (w.inputs.cols != header.n_features || w.inputs.rows != header.window_length ||
        w.targets.cols != header.horizons.output_size())
      throw data_error("window shape does not match archive header");
    detail::write_raw(out, &w.vehicle_id, sizeof(int64_t));
    detail::write_raw(out, &w.start_frame, sizeof(int64_t));
    detail::write_raw(out, w.inputs.a.data(), w.inputs.a.size() * sizeof(double));
    detail::write_raw(out, w.targets.a.data(), w.targets.a.size() * sizeof(double));
  }
}

inline std::pair<ArchiveHeader, std::vector<Window>> read_window_archive(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw data_error("empty window archive");
  if (line != kArchiveMagic) throw data_error("not a window archive (bad magic line '" + line + "')");

  ArchiveHeader h;
  bool saw_end = false;
  while (std::getline(in, line)) {
    if (line == "end_header") {
      saw_end = true;
      break;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw data_error("malformed archive header line '" + line + "'");
    const std::string key = line.substr(0, eq), val = line.substr(eq + 1);
    try {
      if (key == "n_features") h.n_features = std::stoul(val);
      else if (key == "horizons_s") h.horizons.horizons_s = detail::parse_int_list(val);
      else if (key == "distance_divisor") h.scaling.distance_divisor = std::stod(val);
      else if (key == "long_velocity_divisor") h.scaling.long_velocity_divisor = std::stod(val);
      else if (key == "ttc_divisor") h.scaling.ttc_divisor = std::stod(val);
      else if (key == "lateral_velocity_divisor")
        h.scaling.lateral_velocity_divisor = std::stod(val);
      else if (key == "seed") h.seed = std::stoull(val);
      else if (key == "window_length") h.window_length = std::stoul(val);
      else if (key == "window_count") h.window_count = std::stoul(val);
      else throw data_error("unknown archive header key '" + key + "'");
    } catch (const std::logic_error&) {
      throw data_error("malformed archive header line '" + line + "'");
    }
  }
  if (!saw_end) throw data_error("archive header missing end_header");
  try {
    h.horizons.validate();
    h.scaling.validate();
  } catch (const std::invalid_argument& e) {
    throw data_error(std::string("invalid archive header: ") + e.what());
  }

  std::vector<Window> windows;
  windows.reserve(h.window_count);
  for (size_t i = 0; i < h.window_count; ++i) {
    Window w;
    w.inputs = Mat(h.window_length, h.n_features);
    w.targets = Mat(h.window_length, h.horizons.output_size());
    detail::read_raw(in, &w.vehicle_id, sizeof(int64_t), "window vehicle_id");
    detail::read_raw(in, &w.start_frame, sizeof(int64_t), "window start_frame");
    detail::read_raw(in, w.inputs.a.data(), w.inputs.a.size() * sizeof(double), "window inputs");
    detail::read_raw(in, w.targets.a.data(), w.targets.a.size() * sizeof(double), "window targets");
    windows.push_back(std::move(w));
  }
  return {h, std::move(windows)};
}

}  // namespace trajcast
