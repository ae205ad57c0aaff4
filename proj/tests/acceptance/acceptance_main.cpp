// Acceptance suite: one self-contained check per release criterion, one
// PASS/FAIL line each. Exits nonzero if any enforced criterion fails.
//
// Usage: acceptance [--cli <path-to-trajcast-binary>] [--only <n>]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "trajcast/trajcast.hpp"

namespace fs = std::filesystem;
using namespace trajcast;

namespace {

std::string g_cli_path;

double now_s() {
  static const auto t0 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  bool informational = false;
  std::string detail;
};

// ---- 1. filter oracle equivalence --------------------------------------

void oracle_line_fit(const Vec& s, size_t t, size_t half, double period, double& value,
                     double& slope_per_s) {
  const size_t lo = t >= half ? t - half : 0;
  const size_t hi = std::min(t + half, s.size() - 1);
  double n = 0, sum_t = 0, sum_tt = 0, sum_y = 0, sum_ty = 0;
  for (size_t i = lo; i <= hi; ++i) {
    const double ti = static_cast<double>(i);
    n += 1.0;
    sum_t += ti;
    sum_tt += ti * ti;
    sum_y += s[i];
    sum_ty += ti * s[i];
  }
  const double det = n * sum_tt - sum_t * sum_t;
  const double intercept = (sum_y * sum_tt - sum_t * sum_ty) / det;
  const double slope = (n * sum_ty - sum_t * sum_y) / det;
  value = intercept + slope * static_cast<double>(t);
  slope_per_s = slope / period;
}

Outcome criterion1() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(1001);
  const FilterSpec spec;
  double worst = 0.0;
  for (int series = 0; series < 100; ++series) {
    Vec s(200);
    for (double& v : s) v = rng.uniform(-100.0, 100.0);
    const Vec sm = savgol_smooth(s, spec);
    const Vec dv = savgol_derivative(s, spec);
    for (size_t t = 0; t < s.size(); ++t) {
      double val, slope;
      oracle_line_fit(s, t, spec.window_length / 2, spec.sample_period, val, slope);
      worst = std::max(worst, std::abs(sm[t] - val));
      worst = std::max(worst, std::abs(dv[t] - slope));
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char buf[160];
  std::snprintf(buf, sizeof(buf), "max |impl - oracle| = %.3g (tol 1e-9), %.2f s (limit 5 s)",
                worst, secs);
  return {worst < 1e-9 && secs < 5.0, false, buf};
}

// ---- 2. gradient correctness --------------------------------------------

Outcome criterion2() {
  const auto start = std::chrono::steady_clock::now();
  ModelConfig c;
  c.input_size = 10;
  c.lstm_layers = {8};
  c.dense_layers = {{8, Activation::tanh_fn}, {8, Activation::tanh_fn}};
  c.bypass = BypassMode::to_output;
  c.bypass_width = 4;
  c.output_size = 4;
  double worst = 0.0;
  for (uint64_t seed = 1000; seed < 1010; ++seed) {
    const ModelParams p = init_params(c, seed);
    Rng rng(seed - 1000);
    Mat seq(20, 10), targets(20, 4);
    for (double& x : seq.a) x = rng.uniform(-1, 1);
    for (double& x : targets.a) x = rng.uniform(-1, 1);
    worst = std::max(worst, gradient_check(p, seq, targets, 1e-5));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "10 models N=10 hidden=8 T=20, max rel err = %.3g (tol 1e-4), %.1f s (limit 120 s)",
                worst, secs);
  return {worst < 1e-4 && secs < 120.0, false, buf};
}

// ---- 3. state threading --------------------------------------------------

Outcome criterion3() {
  Rng rng(33);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::string& variant = variant_names()[trial % variant_names().size()];
    const ModelConfig c = scaled_config(variant_config(variant, 6), 5);
    const ModelParams p = init_params(c, 4000 + trial);
    const size_t T = 30 + rng.next_below(30);
    Mat seq(T, c.input_size);
    for (double& x : seq.a) x = rng.uniform(-2, 2);
    const Mat whole = model_forward(p, seq).outputs;

    const size_t cut = 1 + rng.next_below(T - 1);
    Mat a(cut, c.input_size), b(T - cut, c.input_size);
    std::copy(seq.a.begin(), seq.a.begin() + cut * c.input_size, a.a.begin());
    std::copy(seq.a.begin() + cut * c.input_size, seq.a.end(), b.a.begin());
    auto first = model_forward(p, a);
    auto second = model_forward(p, b, &first.final_states);
    for (size_t t = 0; t < T; ++t)
      for (size_t j = 0; j < whole.cols; ++j) {
        const double chunked = t < cut ? first.outputs(t, j) : second.outputs(t - cut, j);
        worst = std::max(worst, std::abs(chunked - whole(t, j)));
      }
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf), "50 random models, max |chunked - whole| = %.3g (tol 1e-12)",
                worst);
  return {worst <= 1e-12, false, buf};
}

// ---- 4. neighbor oracle equivalence ---------------------------------------

struct BruteVehicle {
  int64_t id;
  int lane;
  double x, y, vx, vy;
  std::optional<int64_t> preceding;
};

NeighborSet brute_force_neighbors(const std::vector<BruteVehicle>& vehicles, int64_t target_id) {
  const BruteVehicle* target = nullptr;
  for (const auto& v : vehicles)
    if (v.id == target_id) target = &v;

  auto find = [&](int64_t id) -> const BruteVehicle* {
    for (const auto& v : vehicles)
      if (v.id == id) return &v;
    return nullptr;
  };
  auto closest_in_lane = [&](int lane) -> std::optional<int64_t> {
    std::optional<int64_t> best;
    double best_ady = 0;
    bool best_ahead = false;
    for (const auto& v : vehicles) {
      if (v.lane != lane) continue;
      const double dy = v.y - target->y;
      const double ady = std::abs(dy);
      const bool ahead = dy >= 0;
      bool better;
      if (!best) better = true;
      else if (ady != best_ady) better = ady < best_ady;
      else if (ahead != best_ahead) better = ahead;
      else better = v.id < *best;
      if (better) {
        best = v.id;
        best_ady = ady;
        best_ahead = ahead;
      }
    }
    return best;
  };
  auto leader = [&](std::optional<int64_t> id) -> std::optional<int64_t> {
    if (!id) return std::nullopt;
    const BruteVehicle* v = find(*id);
    if (!v || !v->preceding || !find(*v->preceding)) return std::nullopt;
    return v->preceding;
  };
  auto follower = [&](std::optional<int64_t> id) -> std::optional<int64_t> {
    if (!id) return std::nullopt;
    const BruteVehicle* lead = find(*id);
    std::optional<int64_t> best;
    double best_ady = 0;
    for (const auto& v : vehicles) {
      if (!v.preceding || *v.preceding != *id) continue;
      const double ady = std::abs(lead->y - v.y);
      if (!best || ady < best_ady || (ady == best_ady && v.id < *best)) {
        best = v.id;
        best_ady = ady;
      }
    }
    return best;
  };

  NeighborSet out;
  out[NeighborRole::l] = closest_in_lane(target->lane - 1);
  out[NeighborRole::r] = closest_in_lane(target->lane + 1);
  out[NeighborRole::f] = leader(target_id);
  out[NeighborRole::ff] = leader(out[NeighborRole::f]);
  out[NeighborRole::fl] = leader(out[NeighborRole::l]);
  out[NeighborRole::fr] = leader(out[NeighborRole::r]);
  out[NeighborRole::b] = follower(target_id);
  out[NeighborRole::bl] = follower(out[NeighborRole::l]);
  out[NeighborRole::br] = follower(out[NeighborRole::r]);
  return out;
}

Outcome criterion4() {
  Rng rng(440);
  size_t mismatches = 0, queries = 0;
  for (int frame = 0; frame < 1000; ++frame) {
    const size_t n = 1 + rng.next_below(60);
    std::vector<BruteVehicle> vehicles;
    for (size_t i = 0; i < n; ++i) {
      BruteVehicle v;
      v.id = static_cast<int64_t>(i + 1);
      v.lane = 1 + static_cast<int>(rng.next_below(6));
      v.y = 5.0 * static_cast<double>(rng.next_below(80));
      v.x = (static_cast<double>(v.lane) - 0.5) * 3.6;
      v.vx = rng.uniform(-1, 1);
      v.vy = rng.uniform(5, 30);
      vehicles.push_back(v);
    }
    for (auto& v : vehicles) {
      std::optional<int64_t> ahead;
      double best = 0;
      for (const auto& u : vehicles) {
        if (u.id == v.id || u.lane != v.lane) continue;
        const double dy = u.y - v.y;
        if (dy > 0 && (!ahead || dy < best || (dy == best && u.id < *ahead))) {
          ahead = u.id;
          best = dy;
        }
      }
      v.preceding = ahead;
    }

    std::vector<PreparedTrack> tracks;
    for (const auto& v : vehicles) {
      PreparedTrack t;
      t.smoothed.vehicle_id = v.id;
      t.smoothed.frame_ids = {1};
      t.smoothed.x = {v.x};
      t.smoothed.y = {v.y};
      t.smoothed.vx = {v.vx};
      t.smoothed.vy = {v.vy};
      t.lanes = {v.lane};
      t.preceding = {v.preceding};
      tracks.push_back(std::move(t));
    }
    const SceneIndex index = build_scene_index(tracks);
    for (const auto& v : vehicles) {
      const NeighborSet got = find_neighbors(v.id, 1, index);
      const NeighborSet want = brute_force_neighbors(vehicles, v.id);
      ++queries;
      for (size_t p = 0; p < kNumRoles; ++p)
        if (got.ids[p] != want.ids[p]) ++mismatches;
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf), "1000 frames, %zu queries, %zu role mismatches (required: 0)",
                queries, mismatches);
  return {mismatches == 0, false, buf};
}

// ---- synthetic corpora -----------------------------------------------------

std::vector<Window> constant_vehicle_windows() {
  SynthSpec spec;
  spec.n_vehicles = 1;
  spec.lane_change_fraction = 0;
  spec.road_length = 250;
  spec.min_speed = spec.max_speed = 10.0;
  spec.n_frames = 400;
  spec.seed = 5;
  const auto records = generate_synthetic_records(spec);
  const auto tracks = build_tracks(records);
  const auto prepared = prepare_all(tracks, {});
  const auto feats = featurize_tracks(prepared, {}, {}, {});
  return windows_from_features(feats.at(0));
}

// ---- 5. overfit sanity ------------------------------------------------------

Outcome criterion5() {
  const auto start = std::chrono::steady_clock::now();
  const auto windows = constant_vehicle_windows();
  TrainSchedule sched;
  sched.epochs_per_group = 1;
  sched.full_passes = 500;  // every epoch is one minibatch here
  sched.minibatch_size = 32;
  sched.learning_rate = 1e-2;
  sched.seed = 7;
  const ModelConfig mc = scaled_config(variant_config("reference"), 8);
  const auto [params, history] = train(mc, {windows}, sched);
  const double final_loss = history.step_loss.back();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "hidden-8 reference, %zu Adam steps, final minibatch MSE = %.3g (tol 1e-3), "
                "%.1f s (limit 120 s)",
                history.step_loss.size(), final_loss, secs);
  return {history.step_loss.size() == 500 && final_loss < 1e-3 && secs < 120.0, false, buf};
}

// ---- 6. learnability trend ---------------------------------------------------

struct Corpus {
  std::vector<Window> train_windows;
  std::vector<VehicleFeatures> test_features;
};

// 80 constant-speed vehicles and 20 scripted lane changes crossing a
// short segment one at a time (entries are serialized, so every vehicle
// yields one full training window and every scored frame lies inside the
// trained state range).
Corpus learnability_corpus(uint64_t synth_seed, uint64_t split_seed) {
  SynthSpec spec;
  spec.n_vehicles = 100;
  spec.lane_change_fraction = 0.2;
  spec.n_lanes = 5;
  spec.road_length = 60.8;
  spec.min_speed = 3.0;
  spec.max_speed = 3.0;
  spec.headway = 306;
  spec.lane_stagger_frames = 204;
  spec.lane_change_frames = 60;
  spec.lateral_jitter = 0.2;
  spec.n_frames = 20500;
  spec.seed = synth_seed;
  const auto records = generate_synthetic_records(spec);
  const auto tracks = build_tracks(records);
  const auto prepared = prepare_all(tracks, {});
  const auto feats = featurize_tracks(prepared, {}, {}, {});
  std::vector<int64_t> ids;
  for (const auto& vf : feats) ids.push_back(vf.vehicle_id);
  const DatasetSplit split = split_train_test(ids, 0.8, split_seed);
  const std::unordered_set<int64_t> test_ids(split.test_vehicle_ids.begin(),
                                             split.test_vehicle_ids.end());
  Corpus corpus;
  for (const auto& vf : feats) {
    if (test_ids.count(vf.vehicle_id)) {
      corpus.test_features.push_back(vf);
    } else {
      const auto w = windows_from_features(vf);
      corpus.train_windows.insert(corpus.train_windows.end(), w.begin(), w.end());
    }
  }
  return corpus;
}

Outcome criterion6() {
  const auto start = std::chrono::steady_clock::now();
  const Corpus corpus = learnability_corpus(42, 7);

  ModelConfig mc = scaled_config(variant_config("reference"), 32);
  TrainSchedule sched;
  sched.epochs_per_group = 5;
  sched.full_passes = 1000;
  sched.minibatch_size = 1024;  // full batch: no minibatch-sampling noise
  sched.learning_rate = 5e-3;
  sched.seed = 11;
  const auto [params, history] = train(mc, {corpus.train_windows}, sched);

  const HorizonSpec horizons;
  const ScalingSpec scaling;
  const EvalReport rep = evaluate_vehicles(single_model_predictor(params, scaling),
                                           corpus.test_features, scaling, horizons);
  bool monotone = true;
  for (size_t k = 1; k < rep.aggregate.lateral_rmse.size(); ++k)
    if (rep.aggregate.lateral_rmse[k] < rep.aggregate.lateral_rmse[k - 1] - 1e-12)
      monotone = false;
  const double at1s = rep.aggregate.lateral_rmse.front();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream detail;
  detail << "hidden-32, " << corpus.train_windows.size() << " windows, lateral RMSE@1s = "
         << at1s << " m (tol 0.1), monotone 1..10 s = " << (monotone ? "yes" : "NO") << " [";
  for (size_t k = 0; k < rep.aggregate.lateral_rmse.size(); ++k)
    detail << (k ? " " : "") << rep.aggregate.lateral_rmse[k];
  char buf[64];
  std::snprintf(buf, sizeof(buf), "], %.0f s (limit 1800 s)", secs);
  detail << buf;
  return {at1s < 0.1 && monotone && secs < 1800.0, false, detail.str()};
}

// ---- 7. bagging property -------------------------------------------------------

Outcome criterion7() {
  SynthSpec spec;
  spec.n_vehicles = 20;
  spec.lane_change_fraction = 0.2;
  spec.road_length = 300;
  spec.n_frames = 700;
  spec.seed = 77;
  const auto records = generate_synthetic_records(spec);
  const auto tracks = build_tracks(records);
  const auto prepared = prepare_all(tracks, {});
  const auto feats = featurize_tracks(prepared, {}, {}, {});
  std::vector<int64_t> ids;
  for (const auto& vf : feats) ids.push_back(vf.vehicle_id);
  const DatasetSplit split = split_train_test(ids, 0.8, 3);
  const std::unordered_set<int64_t> test_ids(split.test_vehicle_ids.begin(),
                                             split.test_vehicle_ids.end());
  std::vector<Window> train_windows;
  std::vector<VehicleFeatures> test_features;
  for (const auto& vf : feats) {
    if (test_ids.count(vf.vehicle_id)) {
      test_features.push_back(vf);
    } else {
      const auto w = windows_from_features(vf);
      train_windows.insert(train_windows.end(), w.begin(), w.end());
    }
  }

  const ModelConfig mc = scaled_config(variant_config("reference"), 8);
  std::vector<ModelParams> members;
  for (uint64_t seed : {21, 22, 23, 24}) {
    TrainSchedule sched;
    sched.epochs_per_group = 2;
    sched.full_passes = 1;
    sched.learning_rate = 3e-3;
    sched.seed = seed;
    members.push_back(train(mc, {train_windows}, sched).first);
  }
  std::vector<const ModelParams*> ptrs;
  for (const auto& m : members) ptrs.push_back(&m);

  const HorizonSpec horizons;
  const ScalingSpec scaling;
  const EvalReport bag = evaluate_vehicles(ensemble_predictor(ptrs, scaling), test_features,
                                           scaling, horizons);
  std::vector<EvalReport> singles;
  for (const auto& m : members)
    singles.push_back(evaluate_vehicles(single_model_predictor(m, scaling), test_features,
                                        scaling, horizons));
  double worst_excess = -1e300;
  for (size_t k = 0; k < horizons.count(); ++k) {
    double mean_lat = 0, mean_spd = 0;
    for (const auto& r : singles) {
      mean_lat += r.lateral_pooled_mse[k] / 4.0;
      mean_spd += r.speed_pooled_mse[k] / 4.0;
    }
    worst_excess = std::max(worst_excess, bag.lateral_pooled_mse[k] - mean_lat);
    worst_excess = std::max(worst_excess, bag.speed_pooled_mse[k] - mean_spd);
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "4 seeded models, max (bagged MSE - mean member MSE) = %.3g (must be <= 0)",
                worst_excess);
  return {worst_excess <= 1e-9, false, buf};
}

// ---- 8. determinism over the full chain -------------------------------------------

int run_cli(const std::string& args) {
  const std::string cmd = g_cli_path + " " + args + " >/dev/null 2>&1";
  return WEXITSTATUS(std::system(cmd.c_str()));
}

std::string file_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion8() {
  if (g_cli_path.empty()) return {false, false, "no --cli path given"};
  const fs::path base = fs::temp_directory_path() / "trajcast_acceptance_c8";
  fs::remove_all(base);

  auto run_chain = [&](const fs::path& dir) -> bool {
    fs::create_directories(dir);
    {
      std::ofstream cfg(dir / "cfg.ini");
      cfg << "[paths]\nraw = raw.txt\ntracks = out/tracks.csv\nfeatures = out/features.csv\n"
             "windows = out/windows.twa\ncheckpoint_dir = out/ckpt\nreport_dir = out/report\n"
             "history = out/history.csv\n[model]\nvariant = reference\nlstm_units = 4\n"
             "dense_units = 4\n[schedule]\nepochs_per_group = 1\nfull_passes = 2\n"
             "minibatch = 16\nseed = 42\n[split]\nratio = 0.8\nseed = 7\n[synth]\n"
             "vehicles = 20\nframes = 700\nroad_length = 300\nseed = 99\n";
    }
    const std::string b = "--data-root " + dir.string() + " -c " + (dir / "cfg.ini").string();
    const std::string ckpt = (dir / "out/ckpt/ckpt_final.tckpt").string();
    return run_cli(b + " synth") == 0 && run_cli(b + " ingest") == 0 &&
           run_cli(b + " featurize") == 0 && run_cli(b + " window") == 0 &&
           run_cli(b + " train") == 0 &&
           run_cli(b + " evaluate --checkpoint " + ckpt + " --label reference") == 0 &&
           run_cli(b + " predict --checkpoint " + ckpt) == 0 &&
           run_cli(b + " bag --checkpoint " + ckpt + " --checkpoint " + ckpt) == 0 &&
           run_cli(b + " report --input out/report/rmse_reference.csv --input "
                       "out/report/rmse_bagged.csv") == 0;
  };

  if (!run_chain(base / "run1") || !run_chain(base / "run2"))
    return {false, false, "full chain failed to run"};

  const std::vector<std::string> artifacts = {
      "out/tracks.csv",
      "out/features.csv",
      "out/windows.twa",
      "out/history.csv",
      "out/ckpt/ckpt_final.tckpt",
      "out/ckpt/ckpt_pass_001.tckpt",
      "out/ckpt/ckpt_pass_002.tckpt",
      "out/report/rmse_reference.csv",
      "out/report/percentiles_reference.csv",
      "out/report/per_vehicle_reference.csv",
      "out/report/predictions_model.csv",
      "out/report/rmse_bagged.csv",
      "out/report/report_lateral.csv",
      "out/report/report_long_speed.csv",
  };
  size_t checked = 0, equal = 0;
  std::string first_diff;
  for (const auto& rel : artifacts) {
    const std::string a = file_bytes(base / "run1" / rel);
    const std::string b = file_bytes(base / "run2" / rel);
    ++checked;
    if (!a.empty() && a == b) ++equal;
    else if (first_diff.empty()) first_diff = rel;
  }
  fs::remove_all(base);
  char buf[200];
  std::snprintf(buf, sizeof(buf), "%zu/%zu artifacts bitwise identical%s%s", equal, checked,
                first_diff.empty() ? "" : ", first diff: ", first_diff.c_str());
  return {equal == checked, false, buf};
}

// ---- 9. throughput -----------------------------------------------------------------

Outcome criterion9() {
  const ModelConfig mc = variant_config("reference");  // N=49, 256 LSTM, 256/128 dense
  const ModelParams params = init_params(mc, 123);
  Rng rng(9);
  Mat features(5000, mc.input_size);
  for (double& x : features.a) x = rng.uniform(-2, 2);
  const auto start = std::chrono::steady_clock::now();
  const Mat out = predict_full_track(params, features, {});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "reference-size model, 5000-step trajectory in %.2f s (limit 10 s), output %zux%zu",
                secs, out.rows, out.cols);
  return {secs < 10.0 && out.rows == 5000 && out.cols == 20, false, buf};
}

// ---- 10. paper-number reproduction (informational) -----------------------------------

Outcome criterion10() {
  return {true, true,
          "full-corpus targets (lateral RMSE 0.11 m @ 1 s, 0.73 m @ 10 s, bagged 0.65 m @ 10 s) "
          "need the real NGSIM US-101 recordings and ~100 effective epochs; "
          "not reproducible at desk scale, recorded as informational only"};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--cli") == 0 && i + 1 < argc) g_cli_path = argv[++i];
    else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
  }

  struct Entry {
    int index;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> entries = {
      {1, "filter oracle equivalence", criterion1},
      {2, "gradient correctness", criterion2},
      {3, "state threading", criterion3},
      {4, "neighbor oracle equivalence", criterion4},
      {5, "overfit sanity", criterion5},
      {6, "learnability trend", criterion6},
      {7, "bagging property", criterion7},
      {8, "full-chain determinism", criterion8},
      {9, "prediction throughput", criterion9},
      {10, "paper-number reproduction", criterion10},
  };

  int failures = 0;
  for (const auto& e : entries) {
    if (only != 0 && e.index != only) continue;
    const Outcome o = e.run();
    const char* tag = o.informational ? "INFO" : (o.pass ? "PASS" : "FAIL");
    std::printf("[%s] %2d. %s: %s\n", tag, e.index, e.name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass && !o.informational) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
