#include "ppnet/training/trainer.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ppnet/core/error.hpp"
#include "ppnet/core/random.hpp"
#include "ppnet/dataset/augment.hpp"
#include "ppnet/dataset/sampling.hpp"
#include "ppnet/model/checkpoint.hpp"
#include "ppnet/model/network.hpp"
#include "ppnet/training/loss.hpp"

namespace ppnet {

nlohmann::json EpochRecord::to_json() const {
    return {{"epoch", epoch}, {"loss", train_loss}, {"val_accuracy", val_accuracy}, {"lr", learning_rate}, {"wall_time", wall_time}};
}

std::vector<int> predict_entries(const ModelParams& params, const PatchSet& data, const std::vector<std::size_t>& entries,
                                 int batch_size) {
    std::vector<int> out;
    out.reserve(entries.size());
    for (std::size_t start = 0; start < entries.size(); start += static_cast<std::size_t>(batch_size)) {
        const std::size_t end = std::min(entries.size(), start + static_cast<std::size_t>(batch_size));
        std::vector<const Tensor<float>*> batch;
        for (std::size_t i = start; i < end; ++i) batch.push_back(&data.image(entries[i]));
        const auto pred = argmax_rows(predict_logits(params, stack_batch(batch)));
        out.insert(out.end(), pred.begin(), pred.end());
    }
    return out;
}

double balanced_accuracy(const ModelParams& params, const PatchSet& data, const std::vector<std::size_t>& entries) {
    const int classes = data.num_classes();
    std::vector<double> correct(static_cast<std::size_t>(classes)), total(static_cast<std::size_t>(classes));
    const auto pred = predict_entries(params, data, entries);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const int y = data.manifest.entries[entries[i]].label;
        total[static_cast<std::size_t>(y)] += 1;
        if (pred[i] == y) correct[static_cast<std::size_t>(y)] += 1;
    }
    double sum = 0.0;
    int present = 0;
    for (int c = 0; c < classes; ++c)
        if (total[static_cast<std::size_t>(c)] > 0) {
            sum += correct[static_cast<std::size_t>(c)] / total[static_cast<std::size_t>(c)];
            ++present;
        }
    return present ? sum / present : 0.0;
}

std::optional<int> epochs_to_accuracy(const std::vector<EpochRecord>& history, double threshold) {
    for (const auto& r : history)
        if (r.val_accuracy >= threshold) return r.epoch;
    return std::nullopt;
}

std::vector<std::size_t> validation_draw(const DatasetManifest& manifest, const TrainConfig& config) {
    const int per_class = config.val_per_class.value_or(min_class_size(manifest, Split::Val));
    return balanced_epoch(manifest, Split::Val, per_class, mix_seed(config.sampler_seed, fnv1a64("validation")));
}

namespace {

nlohmann::json checkpoint_metadata(const PatchSet& data, const TrainConfig& config, const TrainState& state) {
    nlohmann::json m = nlohmann::json::object();
    m["task"] = std::string(task_name(data.manifest.task));
    m["label_map"] = data.manifest.label_map.to_json();
    m["norm_stats"] = data.manifest.norm_stats ? data.manifest.norm_stats->to_json() : nlohmann::json(nullptr);
    m["config"] = config.to_json();
    m["best_epoch"] = state.best_epoch;
    m["best_val_accuracy"] = state.best_val_accuracy;
    return m;
}

}  // namespace

TrainResult train(const PatchSet& data, const TrainConfig& config_in, const TrainOptions& options,
                  const ModelParams* initial) {
    TrainConfig config = config_in;
    const bool zero_lr = config.learning_rate == 0.0;
    if (zero_lr) config.learning_rate = 1.0;
    config.validate();
    if (zero_lr) config.learning_rate = 0.0;

    const DatasetManifest& manifest = data.manifest;
    if (manifest.task != config.task)
        throw InputError("config task '" + std::string(task_name(config.task)) + "' does not match the dataset task '" +
                         std::string(task_name(manifest.task)) + "'");
    if (data.images.size() != manifest.entries.size()) throw InputError("patch set images do not match its manifest");
    const int classes = manifest.label_map.size();
    const int per_class = config.per_class.value_or(median_class_size(manifest, Split::Train));
    if (config.batch_size > per_class * classes)
        throw InputError("batch_size " + std::to_string(config.batch_size) + " exceeds per_class x classes = " +
                         std::to_string(per_class * classes));
    const auto val_entries = validation_draw(manifest, config);

    TrainState state;
    if (initial) {
        state.params = *initial;
        validate_params(state.params);
        if (state.params.spec.num_classes != classes)
            throw InputError("initial model has " + std::to_string(state.params.spec.num_classes) + " classes, task has " +
                             std::to_string(classes));
    } else {
        state.params = build_model(ModelSpec::preset(config.model, classes), config.init_seed);
    }
    if (state.params.spec.in_channels != data.images.front().dim(0))
        throw InputError("model expects " + std::to_string(state.params.spec.in_channels) + " channels, data has " +
                         std::to_string(data.images.front().dim(0)));
    state.velocity = zero_velocity(state.params);
    state.learning_rate = config.learning_rate;

    TrainResult result;
    result.best = state.params;
    std::ofstream log;
    if (!options.out_dir.empty()) {
        std::filesystem::create_directories(options.out_dir);
        result.checkpoint = options.out_dir / "checkpoint.ckpt";
        log.open(options.out_dir / "train_log.jsonl", std::ios::trunc);
        if (!log) throw InputError("cannot write training log in " + options.out_dir.string());
    }

    const auto t0 = std::chrono::steady_clock::now();
    Network<float> net(state.params);
    int since_improve = 0;
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        const std::uint64_t seed = epoch_seed(config.sampler_seed, static_cast<std::uint64_t>(epoch));
        const auto order = balanced_epoch(manifest, Split::Train, per_class, seed);
        Rng aug_rng(mix_seed(seed, fnv1a64("augment")));
        std::uniform_int_distribution<int> pick(0, kDihedralCount - 1);

        double loss_sum = 0.0;
        std::size_t loss_count = 0;
        int batch_no = 0;
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
            ++batch_no;
            std::vector<Tensor<float>> views;
            std::vector<int> labels;
            views.reserve(end - start);
            for (std::size_t i = start; i < end; ++i) {
                const int t = config.augment ? pick(aug_rng) : 0;
                views.push_back(t == 0 ? data.image(order[i]) : augment(data.image(order[i]), t));
                labels.push_back(manifest.entries[order[i]].label);
            }
            // Batch statistics need at least two samples.
            if (views.size() < 2) continue;
            std::vector<const Tensor<float>*> ptrs;
            for (const auto& v : views) ptrs.push_back(&v);
            const Tensor<float> logits = net.forward(stack_batch(ptrs), Mode::Train);
            Tensor<float> dlogits;
            const double loss = cross_entropy(logits, labels, &dlogits);
            if (!std::isfinite(loss)) {
                std::ostringstream os;
                os << "non-finite loss at epoch " << epoch << ", batch " << batch_no << ", learning rate " << state.learning_rate;
                throw NumericalError(os.str());
            }
            loss_sum += loss * static_cast<double>(labels.size());
            loss_count += labels.size();
            const Gradients<float> grads = net.backward(dlogits, config.freeze_backbone);
            sgd_step(state.params, state.velocity, grads, {state.learning_rate, config.momentum, config.weight_decay});
        }

        EpochRecord rec;
        rec.epoch = epoch;
        rec.train_loss = loss_count ? loss_sum / static_cast<double>(loss_count) : 0.0;
        rec.val_accuracy = balanced_accuracy(state.params, data, val_entries);
        rec.learning_rate = state.learning_rate;
        rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        state.epoch = epoch;
        state.history.push_back(rec);
        if (log) {
            log << rec.to_json().dump() << '\n';
            log.flush();
        }
        if (options.on_epoch) options.on_epoch(rec);

        if (rec.val_accuracy > state.best_val_accuracy) {
            state.best_val_accuracy = rec.val_accuracy;
            state.best_epoch = epoch;
            result.best = state.params;
            result.best.metadata = checkpoint_metadata(data, config, state);
            if (!result.checkpoint.empty()) save_checkpoint(result.checkpoint, result.best);
            since_improve = 0;
        } else if (++since_improve >= config.lr_patience) {
            state.learning_rate *= config.lr_decay;
            since_improve = 0;
        }
        if (config.early_stop_patience && epoch - state.best_epoch >= *config.early_stop_patience) break;
    }
    state.params.metadata = checkpoint_metadata(data, config, state);
    result.state = std::move(state);
    return result;
}

TrainResult train_cooling(const PatchSet& data, const ModelParams& pretrained, const TrainConfig& config,
                          const TrainOptions& options) {
    if (data.manifest.task != Task::Cooling) throw InputError("train_cooling needs a cooling-task dataset");
    const ModelParams init = transfer_head(pretrained, data.num_classes(), config.init_seed);
    return train(data, config, options, &init);
}

}  // namespace ppnet
