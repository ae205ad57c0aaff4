#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <unordered_set>
#include <vector>

#include "trajcast/core/error.hpp"
#include "trajcast/core/rng.hpp"
#include "trajcast/core/tensor.hpp"
#include "trajcast/data/windows.hpp"
#include "trajcast/nn/adam.hpp"
#include "trajcast/nn/model.hpp"

namespace trajcast {

// Training protocol: 5 epochs on each group of 500 vehicles, sweep all
// groups, repeat the sweep 20 times -> 100 effective epochs. Windows are
// shuffled within a group before every epoch; minibatches of 32 windows.
struct TrainSchedule {
  size_t group_size = 500;
  size_t epochs_per_group = 5;
  size_t full_passes = 20;
  size_t minibatch_size = 32;
  double learning_rate = 1e-3;
  uint64_t seed = 0;

  size_t effective_epochs() const { return epochs_per_group * full_passes; }
};

struct GroupEpochStat {
  size_t pass = 0, group = 0, epoch = 0;
  double mean_loss = 0.0;
  double elapsed_s = 0.0;  // wall clock, in-memory only (never serialized)
};

struct TrainHistory {
  std::vector<double> step_loss;           // one entry per parameter update
  std::vector<GroupEpochStat> group_epochs;
};

// step,loss rows; wall-clock markers are deliberately excluded so reruns
// of the same seed produce byte-identical files.
inline void write_history_csv(std::ostream& out, const TrainHistory& h) {
  out << "step,loss\n";
  char buf[64];
  for (size_t i = 0; i < h.step_loss.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i + 1, h.step_loss[i]);
    out << buf;
  }
}

using CheckpointHook = std::function<void(const ModelParams&, size_t pass, size_t step,
                                          const std::string& tag)>;

// Accumulates minibatch-mean gradients over a stacked B x T x N batch.
inline double batch_backward(const ModelParams& params, const Tensor& inputs,
                             const Tensor& targets, ModelParams& grads) {
  const size_t batch = inputs.shape.at(0);
  const size_t t_len = inputs.shape.at(1);
  const double inv_b = 1.0 / static_cast<double>(batch);
  double loss = 0.0;
  for (size_t b = 0; b < batch; ++b) {
    Mat in(t_len, inputs.shape.at(2));
    Mat tg(t_len, targets.shape.at(2));
    std::copy(inputs.slice(b), inputs.slice(b) + in.numel(), in.a.begin());
    std::copy(targets.slice(b), targets.slice(b) + tg.numel(), tg.a.begin());
    loss += inv_b * model_backward(params, in, tg, grads, inv_b);
  }
  return loss;
}

// Runs the full schedule over pre-grouped windows and returns the trained
// parameters plus per-step history. Deterministic under the seed: single
// logical update sequence, fixed reduction order inside each minibatch.
// `allowed_vehicles`, when non-null, is the train-split audit: a window
// from any other vehicle aborts the run.
inline std::pair<ModelParams, TrainHistory> train(
    const ModelConfig& config, const std::vector<std::vector<Window>>& groups,
    const TrainSchedule& schedule, const CheckpointHook& on_checkpoint = {},
    const std::unordered_set<int64_t>* allowed_vehicles = nullptr) {
  size_t total_windows = 0;
  for (const auto& g : groups) total_windows += g.size();
  if (total_windows == 0) throw data_error("train: empty training set");

  for (const auto& g : groups)
    for (const auto& w : g) {
      if (w.inputs.cols != config.input_size)
        throw data_error("train: window width " + std::to_string(w.inputs.cols) +
                         " does not match model input size " + std::to_string(config.input_size));
      if (allowed_vehicles && !allowed_vehicles->count(w.vehicle_id))
        throw data_error("train: window from vehicle " + std::to_string(w.vehicle_id) +
                         " outside the training split");
    }

  ModelParams params = init_params(config, schedule.seed);
  AdamState adam = AdamState::make(params);
  AdamConfig adam_cfg;
  adam_cfg.learning_rate = schedule.learning_rate;
  ModelParams grads = zeros_like(params);
  Rng shuffle_rng(schedule.seed ^ 0x5DEECE66DULL);
  TrainHistory history;
  const auto t0 = std::chrono::steady_clock::now();

  for (size_t pass = 0; pass < schedule.full_passes; ++pass) {
    for (size_t gi = 0; gi < groups.size(); ++gi) {
      const auto& group = groups[gi];
      if (group.empty()) continue;
      std::vector<size_t> order(group.size());
      for (size_t i = 0; i < order.size(); ++i) order[i] = i;

      for (size_t epoch = 0; epoch < schedule.epochs_per_group; ++epoch) {
        shuffle_rng.shuffle(order);
        double epoch_loss = 0.0;
        size_t epoch_batches = 0;

        for (size_t start = 0; start < order.size(); start += schedule.minibatch_size) {
          const size_t bsz = std::min(schedule.minibatch_size, order.size() - start);
          const size_t t_len = group[order[start]].inputs.rows;
          Tensor inputs({bsz, t_len, config.input_size});
          Tensor targets({bsz, t_len, group[order[start]].targets.cols});
          for (size_t b = 0; b < bsz; ++b) {
            const Window& w = group[order[start + b]];
            std::copy(w.inputs.a.begin(), w.inputs.a.end(), inputs.slice(b));
            std::copy(w.targets.a.begin(), w.targets.a.end(), targets.slice(b));
          }

          for (auto& view : param_views(grads)) std::fill_n(view.data, view.size(), 0.0);
          const double loss = batch_backward(params, inputs, targets, grads);
          if (!std::isfinite(loss)) {
            if (on_checkpoint)
              on_checkpoint(params, pass, history.step_loss.size(), "diverged");
            throw numeric_error("train: non-finite loss at update " +
                                std::to_string(history.step_loss.size() + 1));
          }
          adam_update(params, grads, adam, adam_cfg);
          history.step_loss.push_back(loss);
          epoch_loss += loss;
          ++epoch_batches;
        }

        GroupEpochStat stat;
        stat.pass = pass;
        stat.group = gi;
        stat.epoch = epoch;
        stat.mean_loss = epoch_batches ? epoch_loss / static_cast<double>(epoch_batches) : 0.0;
        stat.elapsed_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        history.group_epochs.push_back(stat);
      }
    }
    if (on_checkpoint) on_checkpoint(params, pass, history.step_loss.size(), "pass");
  }
  return {std::move(params), std::move(history)};
}

}  // namespace trajcast
