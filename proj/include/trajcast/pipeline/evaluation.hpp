#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "trajcast/eval/evaluate.hpp"
#include "trajcast/pipeline/features.hpp"

namespace trajcast {

// Maps a scaled feature sequence to unscaled predictions (T x 2K).
using Predictor = std::function<Mat(const Mat&)>;

inline Predictor single_model_predictor(const ModelParams& params, const ScalingSpec& scaling) {
  return [&params, scaling](const Mat& f) { return predict_full_track(params, f, scaling); };
}

inline Predictor ensemble_predictor(const std::vector<const ModelParams*>& members,
                                    const ScalingSpec& scaling) {
  return [members, scaling](const Mat& f) { return bag_predict(members, f, scaling); };
}

inline void unscale_target_matrix(Mat& t, const ScalingSpec& scaling) {
  for (size_t r = 0; r < t.rows; ++r) {
    double* row = t.row(r);
    for (size_t j = 0; j + 1 < t.cols; j += 2) {
      row[j] *= scaling.distance_divisor;
      row[j + 1] *= scaling.long_velocity_divisor;
    }
  }
}

// Full-trajectory evaluation over a set of featurized segments. Each
// segment is predicted with fresh state (a frame gap breaks the scan);
// segments of the same vehicle are pooled before the per-vehicle RMSE, and
// the report aggregates per-vehicle errors plus pooled percentiles and
// pooled MSE per horizon/channel.
inline EvalReport evaluate_vehicles(const Predictor& predict,
                                    const std::vector<VehicleFeatures>& segments,
                                    const ScalingSpec& scaling, const HorizonSpec& horizons) {
  if (segments.empty()) throw data_error("evaluate: no vehicles to evaluate");
  const size_t K = horizons.count();

  struct PerVehicle {
    std::vector<Mat> preds, truths;
    std::vector<std::vector<char>> present;
    size_t total_rows = 0;
  };
  std::map<int64_t, PerVehicle> by_vehicle;

  for (const auto& seg : segments) {
    Mat pred = predict(seg.features);
    if (pred.cols != 2 * K)
      throw data_error("evaluate: model emits " + std::to_string(pred.cols) +
                       " outputs, horizon spec needs " + std::to_string(2 * K));
    Mat truth = seg.targets;
    unscale_target_matrix(truth, scaling);
    auto& pv = by_vehicle[seg.vehicle_id];
    pv.total_rows += pred.rows;
    pv.preds.push_back(std::move(pred));
    pv.truths.push_back(std::move(truth));
    pv.present.push_back(seg.target_present);
  }

  std::vector<VehicleErrors> per_vehicle;
  SignedErrorPool pool(K);
  std::vector<double> lat_sq(K, 0.0), spd_sq(K, 0.0);
  size_t pooled_frames = 0;

  for (auto& [vid, pv] : by_vehicle) {
    Mat preds(pv.total_rows, 2 * K), truths(pv.total_rows, 2 * K);
    std::vector<char> present(pv.total_rows, 0);
    size_t at = 0;
    for (size_t s = 0; s < pv.preds.size(); ++s) {
      for (size_t r = 0; r < pv.preds[s].rows; ++r, ++at) {
        std::copy(pv.preds[s].row(r), pv.preds[s].row(r) + 2 * K, preds.row(at));
        std::copy(pv.truths[s].row(r), pv.truths[s].row(r) + 2 * K, truths.row(at));
        present[at] = pv.present[s][r];
      }
    }

    VehicleErrors ve;
    ve.vehicle_id = vid;
    ve.errors = rmse_per_vehicle(preds, truths, present, K);
    per_vehicle.push_back(std::move(ve));

    for (size_t r = 0; r < preds.rows; ++r) {
      if (!present[r]) continue;
      ++pooled_frames;
      for (size_t k = 0; k < K; ++k) {
        const double el = preds(r, 2 * k) - truths(r, 2 * k);
        const double es = preds(r, 2 * k + 1) - truths(r, 2 * k + 1);
        pool.lateral[k].push_back(el);
        pool.speed[k].push_back(es);
        lat_sq[k] += el * el;
        spd_sq[k] += es * es;
      }
    }
  }

  EvalReport report = aggregate_report(per_vehicle, pool, horizons.horizons_s);
  report.lateral_pooled_mse.resize(K);
  report.speed_pooled_mse.resize(K);
  for (size_t k = 0; k < K; ++k) {
    report.lateral_pooled_mse[k] = lat_sq[k] / static_cast<double>(pooled_frames);
    report.speed_pooled_mse[k] = spd_sq[k] / static_cast<double>(pooled_frames);
  }
  return report;
}

}  // namespace trajcast
