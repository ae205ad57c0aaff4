// trajcast command line: chains the pipeline stage by stage. Every stage
// reads only prior-stage artifacts plus the config file, so identical
// config and seeds reproduce identical artifacts byte for byte.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <unordered_map>
#include <unordered_set>

#include "trajcast/trajcast.hpp"

namespace fs = std::filesystem;
using namespace trajcast;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

struct Cli {
  std::string config_path;
  std::string data_root;

  // per-subcommand extras
  std::string variant_override;
  std::string checkpoint_path;
  std::vector<std::string> checkpoint_paths;
  std::string label = "model";
  std::vector<int64_t> vehicles;
  std::string series = "x";
  std::vector<std::string> report_inputs;
  std::vector<int> report_horizons;
  uint64_t seed_override = 0;
  bool has_seed_override = false;
};

std::string resolve(const Cli& cli, const std::string& path) {
  if (path.empty() || fs::path(path).is_absolute()) return path;
  if (cli.data_root.empty()) return path;
  return (fs::path(cli.data_root) / path).string();
}

RunConfig load_config(const Cli& cli) {
  RunConfig rc;
  if (!cli.config_path.empty()) rc = run_config_from_ini(IniFile::parse_file(cli.config_path));
  if (!cli.variant_override.empty()) rc.variant = cli.variant_override;
  if (cli.has_seed_override) rc.schedule.seed = cli.seed_override;
  return rc;
}

void ensure_parent_dir(const std::string& path) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

std::ifstream open_input(const std::string& path, const char* stage) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw data_error(std::string(stage) + ": missing input artifact '" + path +
                     "' (run the producing stage first)");
  return in;
}

std::ofstream open_output(const std::string& path) {
  ensure_parent_dir(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot open '" + path + "' for writing");
  return out;
}

ModelConfig model_config_for(const RunConfig& rc, size_t output_size) {
  ModelConfig mc = variant_config(rc.variant, output_size);
  if (rc.lstm_units_override)
    for (auto& h : mc.lstm_layers) h = rc.lstm_units_override;
  if (rc.dense_units_override)
    for (auto& d : mc.dense_layers) d.units = rc.dense_units_override;
  return mc;
}

// --- stages --------------------------------------------------------------

void run_synth(const Cli& cli) {
  const RunConfig rc = load_config(cli);
  const auto records = generate_synthetic_records(rc.synth);
  auto out = open_output(resolve(cli, rc.raw_path));
  write_raw_ngsim(out, records);
  std::cout << "synth: wrote " << records.size() << " rows for " << rc.synth.n_vehicles
            << " vehicles to " << resolve(cli, rc.raw_path) << "\n";
}

void run_ingest(const Cli& cli) {
  const RunConfig rc = load_config(cli);
  auto in = open_input(resolve(cli, rc.raw_path), "ingest");
  const auto records = parse_trajectory_file(in, rc.columns);
  const TrackMap tracks = build_tracks(records);
  std::vector<TrajectoryRecord> kept;
  for (const auto& [vid, segs] : tracks)
    for (const auto& seg : segs) kept.insert(kept.end(), seg.records.begin(), seg.records.end());
  auto out = open_output(resolve(cli, rc.tracks_path));
  write_normalized_dump(out, kept);
  std::cout << "ingest: " << records.size() << " rows in, " << kept.size() << " rows across "
            << tracks.size() << " vehicles kept\n";
}

void run_smooth(const Cli& cli) {
  const RunConfig rc = load_config(cli);
  auto in = open_input(resolve(cli, rc.tracks_path), "smooth");
  const auto records = read_normalized_dump(in);
  const TrackMap tracks = build_tracks(records);
  if (tracks.empty()) throw data_error("smooth: no tracks in the normalized dump");
  const int64_t wanted = cli.vehicles.empty() ? tracks.begin()->first : cli.vehicles.front();
  auto it = tracks.find(wanted);
  if (it == tracks.end())
    throw data_error("smooth: vehicle " + std::to_string(wanted) + " not found");

  const bool lateral = cli.series != "y";
  const fs::path dir(resolve(cli, rc.report_dir));
  fs::create_directories(dir);
  auto out = open_output(
      (dir / ("smoothing_" + std::to_string(it->first) + "_" + (lateral ? "x" : "y") + ".csv"))
          .string());
  out << "frame,raw,smoothed,velocity\n";
  char buf[128];
  for (const auto& seg : it->second) {
    const SmoothedTrack sm = smooth_track(seg, rc.filter);
    for (size_t i = 0; i < sm.size(); ++i) {
      const double raw = lateral ? seg.records[i].local_x : seg.records[i].local_y;
      std::snprintf(buf, sizeof(buf), "%lld,%.6f,%.6f,%.6f\n",
                    static_cast<long long>(sm.frame_ids[i]), raw,
                    lateral ? sm.x[i] : sm.y[i], lateral ? sm.vx[i] : sm.vy[i]);
      out << buf;
    }
  }
  std::cout << "smooth: wrote series for vehicle " << it->first << "\n";
}

void run_featurize(const Cli& cli) {
  const RunConfig rc = load_config(cli);
  auto in = open_input(resolve(cli, rc.tracks_path), "featurize");
  const auto records = read_normalized_dump(in);
  const TrackMap tracks = build_tracks(records);
  const auto prepared = prepare_all(tracks, rc.filter);
  const FeatureConfig fc = variant_feature_config(rc.variant);
  const auto features = featurize_tracks(prepared, fc, rc.scaling, rc.horizons);
  auto out = open_output(resolve(cli, rc.features_path));
  write_feature_dump(out, features, fc, rc.horizons);
  size_t rows = 0;
  for (const auto& vf : features) rows += vf.features.rows;
  std::cout << "featurize: " << features.size() << " segments, " << rows << " rows, width "
            << feature_width(fc) << "\n";
}

void run_window(const Cli& cli) {
  const RunConfig rc = load_config(cli);
  auto in = open_input(resolve(cli, rc.features_path), "window");
  const FeatureDump dump = read_feature_dump(in);
  std::vector<Window> windows;
  for (const auto& vf : dump.data) {
    auto w = windows_from_features(vf);
    windows.insert(windows.end(), std::make_move_iterator(w.begin()),
                   std::make_move_iterator(w.end()));
  }
  ArchiveHeader header;
  header.n_features = dump.n_features;
  header.horizons.horizons_s = dump.horizons_s;
  header.scaling = rc.scaling;
  header.seed = rc.schedule.seed;
  auto out = open_output(resolve(cli, rc.windows_path));
  write_window_archive(out, header, windows);
  std::cout << "window: " << windows.size() << " windows of length " << kWindowLength << "\n";
}

void run_train(const Cli& cli) {
  const RunConfig rc = load_config(cli);
  auto in = open_input(resolve(cli, rc.windows_path), "train");
  auto [header, windows] = read_window_archive(in);

  const ModelConfig mc = model_config_for(rc, header.horizons.output_size());
  if (mc.input_size != header.n_features)
    throw data_error("train: model variant '" + rc.variant + "' expects " +
                     std::to_string(mc.input_size) + " features but the archive holds " +
                     std::to_string(header.n_features));

  std::vector<int64_t> ids;
  for (const auto& w : windows) ids.push_back(w.vehicle_id);
  const DatasetSplit split = split_train_test(ids, rc.split_ratio, rc.split_seed);
  const auto groups_of_ids =
      make_vehicle_groups(split.train_vehicle_ids, rc.schedule.group_size, rc.schedule.seed);

  std::unordered_map<int64_t, std::vector<const Window*>> by_vehicle;
  for (const auto& w : windows) by_vehicle[w.vehicle_id].push_back(&w);
  std::vector<std::vector<Window>> groups;
  for (const auto& group_ids : groups_of_ids) {
    std::vector<Window> g;
    for (int64_t vid : group_ids)
      for (const Window* w : by_vehicle[vid]) g.push_back(*w);
    groups.push_back(std::move(g));
  }
  const std::unordered_set<int64_t> allowed(split.train_vehicle_ids.begin(),
                                            split.train_vehicle_ids.end());

  const std::string ckpt_dir = resolve(cli, rc.checkpoint_dir);
  fs::create_directories(ckpt_dir);
  const auto hook = [&](const ModelParams& p, size_t pass, size_t step, const std::string& tag) {
    char name[64];
    if (tag == "pass")
      std::snprintf(name, sizeof(name), "ckpt_pass_%03zu.tckpt", pass + 1);
    else
      std::snprintf(name, sizeof(name), "ckpt_%s.tckpt", tag.c_str());
    CheckpointMeta meta;
    meta.seed = rc.schedule.seed;
    meta.step = step;
    save_checkpoint_file((fs::path(ckpt_dir) / name).string(), p, meta);
  };

  auto [params, history] = train(mc, groups, rc.schedule, hook, &allowed);
  CheckpointMeta meta;
  meta.seed = rc.schedule.seed;
  meta.step = history.step_loss.size();
  save_checkpoint_file((fs::path(ckpt_dir) / "ckpt_final.tckpt").string(), params, meta);
  auto hist = open_output(resolve(cli, rc.history_path));
  write_history_csv(hist, history);
  std::cout << "train: " << history.step_loss.size() << " updates, final minibatch loss "
            << (history.step_loss.empty() ? 0.0 : history.step_loss.back()) << "\n";
}

// Shared by evaluate/bag: featurized test split + report writing.
void evaluate_and_report(const Cli& cli, const RunConfig& rc, const Predictor& predict,
                         size_t model_input_size, size_t model_output_size,
                         const std::string& label) {
  auto in = open_input(resolve(cli, rc.features_path), "evaluate");
  const FeatureDump dump = read_feature_dump(in);
  if (dump.n_features != model_input_size)
    throw data_error("evaluate: checkpoint expects " + std::to_string(model_input_size) +
                     " features but the dump holds " + std::to_string(dump.n_features));
  HorizonSpec horizons;
  horizons.horizons_s = dump.horizons_s;
  if (horizons.output_size() != model_output_size)
    throw data_error("evaluate: checkpoint emits " + std::to_string(model_output_size) +
                     " outputs but the dump holds " + std::to_string(horizons.output_size()));

  std::vector<int64_t> ids;
  for (const auto& vf : dump.data) ids.push_back(vf.vehicle_id);
  const DatasetSplit split = split_train_test(ids, rc.split_ratio, rc.split_seed);
  const std::unordered_set<int64_t> test_ids(split.test_vehicle_ids.begin(),
                                             split.test_vehicle_ids.end());
  std::vector<VehicleFeatures> test;
  for (const auto& vf : dump.data)
    if (test_ids.count(vf.vehicle_id)) test.push_back(vf);

  const EvalReport report = evaluate_vehicles(predict, test, rc.scaling, horizons);

  const fs::path dir(resolve(cli, rc.report_dir));
  fs::create_directories(dir);
  {
    auto out = open_output((dir / ("rmse_" + label + ".csv")).string());
    write_horizon_table_csv(out, label, report);
  }
  {
    auto out = open_output((dir / ("percentiles_" + label + ".csv")).string());
    write_percentile_table_csv(out, report);
  }
  {
    auto out = open_output((dir / ("per_vehicle_" + label + ".csv")).string());
    write_per_vehicle_csv(out, report);
  }
  std::cout << "evaluate[" << label << "]: " << report.per_vehicle.size()
            << " test vehicles, lateral RMSE @" << report.horizons_s.back()
            << "s = " << report.aggregate.lateral_rmse.back() << " m\n";
}

void run_evaluate(const Cli& cli) {
  const RunConfig rc = load_config(cli);
  auto [params, meta] = load_checkpoint_file(resolve(cli, cli.checkpoint_path));
  const ScalingSpec scaling = rc.scaling;
  evaluate_and_report(cli, rc, single_model_predictor(params, scaling), params.config.input_size,
                      params.config.output_size, cli.label);
}

void run_bag(const Cli& cli) {
  const RunConfig rc = load_config(cli);
  if (cli.checkpoint_paths.empty()) throw data_error("bag: need at least one --checkpoint");
  std::vector<std::pair<ModelParams, CheckpointMeta>> loaded;
  for (const auto& p : cli.checkpoint_paths) loaded.push_back(load_checkpoint_file(resolve(cli, p)));
  std::vector<const ModelParams*> members;
  for (const auto& [params, meta] : loaded) members.push_back(&params);
  for (const ModelParams* m : members) {
    if (m->config.input_size != members.front()->config.input_size ||
        m->config.output_size != members.front()->config.output_size)
      throw data_error("bag: ensemble members disagree on input/output sizes");
  }
  evaluate_and_report(cli, rc, ensemble_predictor(members, rc.scaling),
                      members.front()->config.input_size, members.front()->config.output_size,
                      cli.label == "model" ? "bagged" : cli.label);
}

void run_predict(const Cli& cli) {
  const RunConfig rc = load_config(cli);
  auto [params, meta] = load_checkpoint_file(resolve(cli, cli.checkpoint_path));
  auto in = open_input(resolve(cli, rc.features_path), "predict");
  const FeatureDump dump = read_feature_dump(in);
  if (dump.n_features != params.config.input_size)
    throw data_error("predict: checkpoint expects " + std::to_string(params.config.input_size) +
                     " features but the dump holds " + std::to_string(dump.n_features));
  const std::unordered_set<int64_t> wanted(cli.vehicles.begin(), cli.vehicles.end());

  const fs::path dir(resolve(cli, rc.report_dir));
  fs::create_directories(dir);
  auto out = open_output((dir / ("predictions_" + cli.label + ".csv")).string());
  out << "vehicle_id,frame_id,x_now_m,vy_now_mps";
  for (int h : dump.horizons_s) out << ",x_pred_h" << h << "_m,vy_pred_h" << h << "_mps";
  out << '\n';

  size_t emitted = 0;
  char buf[64];
  for (const auto& vf : dump.data) {
    if (!wanted.empty() && !wanted.count(vf.vehicle_id)) continue;
    const Mat pred = predict_full_track(params, vf.features, rc.scaling);
    for (size_t t = 0; t < pred.rows; ++t) {
      out << vf.vehicle_id << ',' << vf.frames[t];
      std::snprintf(buf, sizeof(buf), ",%.6f,%.6f",
                    vf.features(t, 0) * rc.scaling.distance_divisor,
                    vf.features(t, 3) * rc.scaling.long_velocity_divisor);
      out << buf;
      for (size_t j = 0; j < pred.cols; j += 2) {
        std::snprintf(buf, sizeof(buf), ",%.6f,%.6f", pred(t, j), pred(t, j + 1));
        out << buf;
      }
      out << '\n';
      ++emitted;
    }
  }
  std::cout << "predict: wrote " << emitted << " rows\n";
}

void run_report(const Cli& cli) {
  const RunConfig rc = load_config(cli);
  if (cli.report_inputs.empty()) throw data_error("report: need at least one --input rmse CSV");

  struct Row {
    std::string model;
    std::map<int, std::pair<double, double>> by_horizon;  // lat, speed
  };
  std::vector<Row> rows;
  std::vector<int> horizons_seen;

  for (const auto& path : cli.report_inputs) {
    auto in = open_input(resolve(cli, path), "report");
    std::string line;
    if (!std::getline(in, line) || line != "model,horizon_s,lateral_rmse_m,long_speed_rmse_mps")
      throw data_error("report: '" + path + "' is not an rmse table");
    Row* cur = nullptr;
    size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      std::istringstream ss(line);
      std::string model, tok;
      std::getline(ss, model, ',');
      std::getline(ss, tok, ',');
      const int h = std::stoi(tok);
      std::getline(ss, tok, ',');
      const double lat = std::stod(tok);
      std::getline(ss, tok, ',');
      const double spd = std::stod(tok);
      if (!cur || cur->model != model) {
        rows.push_back({model, {}});
        cur = &rows.back();
      }
      cur->by_horizon[h] = {lat, spd};
      if (std::find(horizons_seen.begin(), horizons_seen.end(), h) == horizons_seen.end())
        horizons_seen.push_back(h);
    }
  }
  std::sort(horizons_seen.begin(), horizons_seen.end());
  std::vector<int> horizons = cli.report_horizons.empty() ? horizons_seen : cli.report_horizons;

  const fs::path dir(resolve(cli, rc.report_dir));
  fs::create_directories(dir);
  for (const bool lateral : {true, false}) {
    auto out = open_output((dir / (lateral ? "report_lateral.csv" : "report_long_speed.csv")).string());
    out << "model";
    for (int h : horizons) out << ',' << h << 's';
    out << '\n';
    char buf[32];
    for (const auto& row : rows) {
      out << row.model;
      for (int h : horizons) {
        auto it = row.by_horizon.find(h);
        if (it == row.by_horizon.end()) {
          out << ",";
        } else {
          std::snprintf(buf, sizeof(buf), ",%.6f", lateral ? it->second.first : it->second.second);
          out << buf;
        }
      }
      out << '\n';
    }
  }
  std::cout << "report: " << rows.size() << " models x " << horizons.size() << " horizons\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"highway trajectory prediction pipeline"};
  app.require_subcommand(1);

  Cli cli;
  if (const char* env = std::getenv("TRAJCAST_DATA_ROOT")) cli.data_root = env;

  app.add_option("--config,-c", cli.config_path, "experiment config file (INI)");
  app.add_option("--data-root", cli.data_root, "base directory for relative paths");
  app.add_option("--variant", cli.variant_override,
                 "model variant override (reference, type, no-ff, no-bypass, bypass-before, "
                 "linear-activation, two-lstm, three-dense)");
  auto* seed_opt = app.add_option("--seed", cli.seed_override, "training seed override");

  app.add_subcommand("synth", "generate a synthetic raw data file");
  app.add_subcommand("ingest", "parse raw data into the normalized track dump");
  auto* sm = app.add_subcommand("smooth", "dump one vehicle's raw vs smoothed series");
  sm->add_option("--vehicle", cli.vehicles, "vehicle id (default: first)")->delimiter(',');
  sm->add_option("--series", cli.series, "x (lateral) or y (longitudinal)");
  app.add_subcommand("featurize", "build the per-frame feature/target dump");
  app.add_subcommand("window", "slice features into the training window archive");
  app.add_subcommand("train", "run the training schedule, write checkpoints");

  auto* ev = app.add_subcommand("evaluate", "whole-trajectory RMSE report on the test split");
  ev->add_option("--checkpoint", cli.checkpoint_path, "checkpoint to evaluate")->required();
  ev->add_option("--label", cli.label, "model label used in report files");

  auto* pr = app.add_subcommand("predict", "per-frame predictions for chosen vehicles");
  pr->add_option("--checkpoint", cli.checkpoint_path, "checkpoint to use")->required();
  pr->add_option("--vehicle", cli.vehicles, "vehicle ids (default: all)")->delimiter(',');
  pr->add_option("--label", cli.label, "label used in the output file name");

  auto* bg = app.add_subcommand("bag", "evaluate the output-average of several checkpoints");
  bg->add_option("--checkpoint", cli.checkpoint_paths, "ensemble member checkpoints")->required();
  bg->add_option("--label", cli.label, "model label used in report files");

  auto* rp = app.add_subcommand("report", "merge rmse tables into wide per-model tables");
  rp->add_option("--input", cli.report_inputs, "rmse_*.csv files to merge")->required();
  rp->add_option("--horizons", cli.report_horizons, "horizon subset to print")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }
  cli.has_seed_override = seed_opt->count() > 0;

  try {
    if (app.got_subcommand("synth")) run_synth(cli);
    else if (app.got_subcommand("ingest")) run_ingest(cli);
    else if (app.got_subcommand("smooth")) run_smooth(cli);
    else if (app.got_subcommand("featurize")) run_featurize(cli);
    else if (app.got_subcommand("window")) run_window(cli);
    else if (app.got_subcommand("train")) run_train(cli);
    else if (app.got_subcommand("evaluate")) run_evaluate(cli);
    else if (app.got_subcommand("predict")) run_predict(cli);
    else if (app.got_subcommand("bag")) run_bag(cli);
    else if (app.got_subcommand("report")) run_report(cli);
  } catch (const numeric_error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}
