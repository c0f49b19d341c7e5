#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppnet/dataset/patch_set.hpp"
#include "ppnet/model/params.hpp"
#include "ppnet/training/config.hpp"

namespace ppnet {

struct EpochRecord {
    int epoch = 0;
    double train_loss = 0.0;
    double val_accuracy = 0.0;
    double learning_rate = 0.0;
    double wall_time = 0.0;  // seconds since training started

    nlohmann::json to_json() const;
};

struct TrainState {
    ModelParams params;
    Gradients<float> velocity;
    int epoch = 0;
    double learning_rate = 0.0;
    double best_val_accuracy = -1.0;
    int best_epoch = 0;
    std::vector<EpochRecord> history;
};

struct TrainOptions {
    std::filesystem::path out_dir;  // checkpoint.ckpt and train_log.jsonl; empty disables file output
    std::function<void(const EpochRecord&)> on_epoch;
};

struct TrainResult {
    TrainState state;
    ModelParams best;  // parameters of the best validation epoch (ties: earlier)
    std::filesystem::path checkpoint;
};

/// Balanced-epoch SGD training. Each epoch draws `per_class` training
/// entries per class, applies a random dihedral transform to each (when
/// augmenting), runs minibatches through sgd_step, then scores a fixed
/// balanced validation draw. The learning rate decays after `lr_patience`
/// epochs without improvement; training stops early after
/// `early_stop_patience`. A zero learning rate is accepted here and leaves
/// the trainable parameters untouched. Throws NumericalError on a
/// non-finite loss.
TrainResult train(const PatchSet& data, const TrainConfig& config, const TrainOptions& options = {},
                  const ModelParams* initial = nullptr);

/// Four-class cooling training initialised from a plant-task model with a
/// fresh head.
TrainResult train_cooling(const PatchSet& data, const ModelParams& pretrained, const TrainConfig& config,
                          const TrainOptions& options = {});

/// Eval-mode class predictions for the given entries.
std::vector<int> predict_entries(const ModelParams& params, const PatchSet& data, const std::vector<std::size_t>& entries,
                                 int batch_size = 64);

/// Mean per-class accuracy of `params` over the given entries.
double balanced_accuracy(const ModelParams& params, const PatchSet& data, const std::vector<std::size_t>& entries);

/// First epoch whose validation accuracy reaches `threshold`, if any.
std::optional<int> epochs_to_accuracy(const std::vector<EpochRecord>& history, double threshold);

/// Fixed balanced validation draw used during training.
std::vector<std::size_t> validation_draw(const DatasetManifest& manifest, const TrainConfig& config);

}  // namespace ppnet
