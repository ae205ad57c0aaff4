#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "trajcast/core/error.hpp"
#include "trajcast/nn/model.hpp"

namespace trajcast {

static_assert(std::endian::native == std::endian::little,
              "checkpoints are defined little-endian; big-endian hosts are unsupported");

inline constexpr const char* kCheckpointMagic = "trajcast-checkpoint";
inline constexpr const char* kCheckpointVersion = "v1";

struct CheckpointMeta {
  uint64_t seed = 0;
  uint64_t step = 0;
};

// Checkpoint file: a key=value text header describing the architecture,
// terminated by "end_header", then one block per parameter tensor:
//   "block <name> <rows> <cols>\n" + rows*cols little-endian doubles
// in row-major order. Byte layout in docs/formats.md.

namespace detail {

inline std::string activation_token(Activation a) {
  return a == Activation::tanh_fn ? "tanh" : "linear";
}

inline Activation activation_from_token(const std::string& t) {
  if (t == "tanh") return Activation::tanh_fn;
  if (t == "linear") return Activation::linear;
  throw checkpoint_error(checkpoint_error_kind::bad_header, "unknown activation '" + t + "'");
}

inline BypassMode bypass_from_token(const std::string& t) {
  if (t == "to_output") return BypassMode::to_output;
  if (t == "before_dense") return BypassMode::before_dense;
  if (t == "none") return BypassMode::none;
  throw checkpoint_error(checkpoint_error_kind::bad_header, "unknown bypass mode '" + t + "'");
}

}  // namespace detail

inline void save_checkpoint(std::ostream& out, const ModelParams& params,
                            const CheckpointMeta& meta = {}) {
  const ModelConfig& c = params.config;
  out << kCheckpointMagic << ' ' << kCheckpointVersion << '\n';
  out << "input_size=" << c.input_size << '\n';
  out << "lstm_layers=";
  for (size_t i = 0; i < c.lstm_layers.size(); ++i) out << (i ? "," : "") << c.lstm_layers[i];
  out << '\n';
  out << "dense_layers=";
  for (size_t i = 0; i < c.dense_layers.size(); ++i)
    out << (i ? "," : "") << c.dense_layers[i].units << ':'
        << detail::activation_token(c.dense_layers[i].act);
  out << '\n';
  out << "bypass=" << bypass_mode_name(c.bypass) << '\n';
  out << "bypass_width=" << c.bypass_width << '\n';
  out << "output_size=" << c.output_size << '\n';
  out << "use_type=" << (c.use_type ? 1 : 0) << '\n';
  out << "use_ff=" << (c.use_ff ? 1 : 0) << '\n';
  out << "seed=" << meta.seed << '\n';
  out << "step=" << meta.step << '\n';
  out << "end_header\n";

  auto views = param_views(const_cast<ModelParams&>(params));
  for (const auto& v : views) {
    out << "block " << v.name << ' ' << v.rows << ' ' << v.cols << '\n';
    out.write(reinterpret_cast<const char*>(v.data),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
  }
}

inline std::pair<ModelParams, CheckpointMeta> load_checkpoint(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw checkpoint_error(checkpoint_error_kind::truncated, "empty checkpoint");
  {
    std::istringstream ss(line);
    std::string magic, version;
    ss >> magic >> version;
    if (magic != kCheckpointMagic)
      throw checkpoint_error(checkpoint_error_kind::bad_header, "not a checkpoint file");
    if (version != kCheckpointVersion)
      throw checkpoint_error(checkpoint_error_kind::version_mismatch,
                             "unsupported checkpoint version '" + version + "'");
  }

  ModelConfig c;
  c.lstm_layers.clear();
  c.dense_layers.clear();
  CheckpointMeta meta;
  bool saw_end = false;
  while (std::getline(in, line)) {
    if (line == "end_header") {
      saw_end = true;
      break;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw checkpoint_error(checkpoint_error_kind::bad_header,
                             "malformed header line '" + line + "'");
    const std::string key = line.substr(0, eq), val = line.substr(eq + 1);
    try {
      if (key == "input_size") c.input_size = std::stoul(val);
      else if (key == "lstm_layers") {
        std::istringstream ss(val);
        std::string tok;
        while (std::getline(ss, tok, ',')) c.lstm_layers.push_back(std::stoul(tok));
      } else if (key == "dense_layers") {
        std::istringstream ss(val);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
          const auto colon = tok.find(':');
          if (colon == std::string::npos)
            throw checkpoint_error(checkpoint_error_kind::bad_header,
                                   "malformed dense layer spec '" + tok + "'");
          c.dense_layers.push_back({std::stoul(tok.substr(0, colon)),
                                    detail::activation_from_token(tok.substr(colon + 1))});
        }
      } else if (key == "bypass") c.bypass = detail::bypass_from_token(val);
      else if (key == "bypass_width") c.bypass_width = std::stoul(val);
      else if (key == "output_size") c.output_size = std::stoul(val);
      else if (key == "use_type") c.use_type = val == "1";
      else if (key == "use_ff") c.use_ff = val == "1";
      else if (key == "seed") meta.seed = std::stoull(val);
      else if (key == "step") meta.step = std::stoull(val);
      else
        throw checkpoint_error(checkpoint_error_kind::bad_header,
                               "unknown header key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw checkpoint_error(checkpoint_error_kind::bad_header,
                             "malformed header value in '" + line + "'");
    }
  }
  if (!saw_end)
    throw checkpoint_error(checkpoint_error_kind::truncated, "checkpoint header missing end_header");

  ModelParams params = make_params(c);
  auto views = param_views(params);
  for (auto& v : views) {
    if (!std::getline(in, line))
      throw checkpoint_error(checkpoint_error_kind::truncated,
                             "checkpoint ends before block " + v.name);
    std::istringstream ss(line);
    std::string tag, name;
    size_t rows = 0, cols = 0;
    ss >> tag >> name >> rows >> cols;
    if (tag != "block" || name != v.name)
      throw checkpoint_error(checkpoint_error_kind::shape_mismatch,
                             "expected block " + v.name + ", found '" + line + "'");
    if (rows != v.rows || cols != v.cols)
      throw checkpoint_error(checkpoint_error_kind::shape_mismatch,
                             "block " + v.name + " is " + std::to_string(rows) + "x" +
                                 std::to_string(cols) + ", header implies " +
                                 std::to_string(v.rows) + "x" + std::to_string(v.cols));
    in.read(reinterpret_cast<char*>(v.data),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (static_cast<size_t>(in.gcount()) != v.size() * sizeof(double))
      throw checkpoint_error(checkpoint_error_kind::truncated,
                             "truncated data in block " + v.name);
  }
  return {std::move(params), meta};
}

// Atomic file write: temp file in the same directory, then rename.
inline void save_checkpoint_file(const std::string& path, const ModelParams& params,
                                 const CheckpointMeta& meta = {}) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw data_error("cannot open '" + tmp + "' for writing");
    save_checkpoint(out, params, meta);
    if (!out) throw data_error("write failed for '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

inline std::pair<ModelParams, CheckpointMeta> load_checkpoint_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open checkpoint '" + path + "'");
  return load_checkpoint(in);
}

}  // namespace trajcast
