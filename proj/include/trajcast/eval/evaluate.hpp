#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "trajcast/core/error.hpp"
#include "trajcast/data/scaling.hpp"
#include "trajcast/data/targets.hpp"
#include "trajcast/nn/model.hpp"

namespace trajcast {

// Per-horizon RMS errors in physical units.
struct HorizonErrors {
  std::vector<double> lateral_rmse;     // m
  std::vector<double> long_speed_rmse;  // m/s
};

struct VehicleErrors {
  int64_t vehicle_id = 0;
  HorizonErrors errors;
};

// Signed per-frame prediction errors pooled over the evaluation set,
// indexed by horizon. Feed for the percentile bands.
struct SignedErrorPool {
  std::vector<std::vector<double>> lateral;  // [horizon] -> samples, m
  std::vector<std::vector<double>> speed;    // [horizon] -> samples, m/s

  explicit SignedErrorPool(size_t horizons = 0) : lateral(horizons), speed(horizons) {}
};

constexpr std::array<double, 5> kReportPercentiles = {5, 25, 50, 75, 95};

struct EvalReport {
  std::vector<int> horizons_s;
  std::vector<VehicleErrors> per_vehicle;
  HorizonErrors aggregate;                          // mean over vehicles
  std::vector<std::array<double, 5>> lateral_pct;   // [horizon] -> p5..p95
  std::vector<std::array<double, 5>> speed_pct;
  std::vector<double> lateral_pooled_mse;           // pooled over all frames
  std::vector<double> speed_pooled_mse;
};

// Whole-trajectory prediction: one forward scan with persistent state, no
// windowing, outputs unscaled back to meters and m/s.
inline Mat predict_full_track(const ModelParams& params, const Mat& scaled_features,
                              const ScalingSpec& scaling) {
  Mat out = model_forward(params, scaled_features).outputs;
  for (size_t t = 0; t < out.rows; ++t) {
    double* row = out.row(t);
    for (size_t j = 0; j + 1 < out.cols; j += 2) {
      row[j] *= scaling.distance_divisor;
      row[j + 1] *= scaling.long_velocity_divisor;
    }
  }
  return out;
}

// Elementwise mean of the member predictions.
inline Mat bag_predict(const std::vector<const ModelParams*>& ensemble, const Mat& scaled_features,
                       const ScalingSpec& scaling) {
  if (ensemble.empty()) throw data_error("bag_predict: empty ensemble");
  const size_t out_size = ensemble.front()->config.output_size;
  for (const ModelParams* m : ensemble)
    if (m->config.output_size != out_size || m->config.input_size != scaled_features.cols)
      throw data_error("bag_predict: incompatible member model");
  Mat sum = predict_full_track(*ensemble.front(), scaled_features, scaling);
  for (size_t i = 1; i < ensemble.size(); ++i) {
    const Mat next = predict_full_track(*ensemble[i], scaled_features, scaling);
    for (size_t k = 0; k < sum.a.size(); ++k) sum.a[k] += next.a[k];
  }
  const double inv = 1.0 / static_cast<double>(ensemble.size());
  for (double& v : sum.a) v *= inv;
  return sum;
}

// RMSE per horizon and channel over the frames that have targets.
// `predictions` and `truth` are T x 2K in physical units; `present`
// flags the frames whose future is observed.
inline HorizonErrors rmse_per_vehicle(const Mat& predictions, const Mat& truth,
                                      const std::vector<char>& present, size_t horizons) {
  if (predictions.rows != truth.rows || predictions.cols != truth.cols ||
      predictions.cols != 2 * horizons || present.size() != predictions.rows)
    throw data_error("rmse_per_vehicle: shape mismatch");
  size_t n = 0;
  std::vector<double> lat_sq(horizons, 0.0), spd_sq(horizons, 0.0);
  for (size_t t = 0; t < predictions.rows; ++t) {
    if (!present[t]) continue;
    ++n;
    for (size_t k = 0; k < horizons; ++k) {
      const double el = predictions(t, 2 * k) - truth(t, 2 * k);
      const double es = predictions(t, 2 * k + 1) - truth(t, 2 * k + 1);
      lat_sq[k] += el * el;
      spd_sq[k] += es * es;
    }
  }
  if (n == 0) throw data_error("rmse_per_vehicle: no frames with targets");
  HorizonErrors e;
  e.lateral_rmse.resize(horizons);
  e.long_speed_rmse.resize(horizons);
  for (size_t k = 0; k < horizons; ++k) {
    e.lateral_rmse[k] = std::sqrt(lat_sq[k] / static_cast<double>(n));
    e.long_speed_rmse[k] = std::sqrt(spd_sq[k] / static_cast<double>(n));
  }
  return e;
}

// Linear-interpolation percentile over a sample set.
inline double percentile(std::vector<double> samples, double p) {
  if (samples.empty()) throw data_error("percentile: empty sample set");
  std::sort(samples.begin(), samples.end());
  const double rank = p / 100.0 * static_cast<double>(samples.size() - 1);
  const size_t lo = static_cast<size_t>(rank);
  const size_t hi = std::min(lo + 1, samples.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return samples[lo] + frac * (samples[hi] - samples[lo]);
}

// Vehicle-mean aggregation plus pooled signed-error percentiles.
inline EvalReport aggregate_report(const std::vector<VehicleErrors>& per_vehicle,
                                   const SignedErrorPool& pool,
                                   const std::vector<int>& horizons_s) {
  if (per_vehicle.empty()) throw data_error("aggregate_report: no vehicles");
  const size_t horizons = horizons_s.size();
  EvalReport r;
  r.horizons_s = horizons_s;
  r.per_vehicle = per_vehicle;
  r.aggregate.lateral_rmse.assign(horizons, 0.0);
  r.aggregate.long_speed_rmse.assign(horizons, 0.0);
  for (const auto& v : per_vehicle) {
    for (size_t k = 0; k < horizons; ++k) {
      r.aggregate.lateral_rmse[k] += v.errors.lateral_rmse[k];
      r.aggregate.long_speed_rmse[k] += v.errors.long_speed_rmse[k];
    }
  }
  const double inv = 1.0 / static_cast<double>(per_vehicle.size());
  for (size_t k = 0; k < horizons; ++k) {
    r.aggregate.lateral_rmse[k] *= inv;
    r.aggregate.long_speed_rmse[k] *= inv;
  }
  r.lateral_pct.resize(horizons);
  r.speed_pct.resize(horizons);
  for (size_t k = 0; k < horizons; ++k) {
    for (size_t i = 0; i < kReportPercentiles.size(); ++i) {
      r.lateral_pct[k][i] = percentile(pool.lateral[k], kReportPercentiles[i]);
      r.speed_pct[k][i] = percentile(pool.speed[k], kReportPercentiles[i]);
    }
  }
  return r;
}

// --- report files -------------------------------------------------------

inline void write_horizon_table_csv(std::ostream& out, const std::string& model,
                                    const EvalReport& r) {
  out << "model,horizon_s,lateral_rmse_m,long_speed_rmse_mps\n";
  char buf[128];
  for (size_t k = 0; k < r.horizons_s.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%s,%d,%.6f,%.6f\n", model.c_str(), r.horizons_s[k],
                  r.aggregate.lateral_rmse[k], r.aggregate.long_speed_rmse[k]);
    out << buf;
  }
}

inline void write_percentile_table_csv(std::ostream& out, const EvalReport& r) {
  out << "horizon_s,channel,p5,p25,p50,p75,p95\n";
  char buf[256];
  for (size_t k = 0; k < r.horizons_s.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%d,lateral_position_m,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                  r.horizons_s[k], r.lateral_pct[k][0], r.lateral_pct[k][1], r.lateral_pct[k][2],
                  r.lateral_pct[k][3], r.lateral_pct[k][4]);
    out << buf;
    std::snprintf(buf, sizeof(buf), "%d,longitudinal_speed_mps,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                  r.horizons_s[k], r.speed_pct[k][0], r.speed_pct[k][1], r.speed_pct[k][2],
                  r.speed_pct[k][3], r.speed_pct[k][4]);
    out << buf;
  }
}

inline void write_per_vehicle_csv(std::ostream& out, const EvalReport& r) {
  out << "vehicle_id,horizon_s,lateral_rmse_m,long_speed_rmse_mps\n";
  char buf[128];
  for (const auto& v : r.per_vehicle) {
    for (size_t k = 0; k < r.horizons_s.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%lld,%d,%.6f,%.6f\n", static_cast<long long>(v.vehicle_id),
                    r.horizons_s[k], v.errors.lateral_rmse[k], v.errors.long_speed_rmse[k]);
      out << buf;
    }
  }
}

}  // namespace trajcast
