#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "ppnet/dataset/label_map.hpp"
#include "ppnet/training/optimizer.hpp"

namespace ppnet {

struct TrainConfig {
    Task task = Task::Plant;
    std::string model = "resnet50";  // ModelSpec preset
    double learning_rate = 0.01;
    double momentum = 0.9;
    double weight_decay = 1e-4;
    int batch_size = 32;
    int epochs = 100;
    std::optional<int> per_class;      // balanced draw per class and epoch; default: median train class size
    std::optional<int> val_per_class;  // default: smallest validation class
    std::uint64_t init_seed = 0;
    std::uint64_t sampler_seed = 0;
    std::optional<std::string> pretrained;
    std::optional<int> early_stop_patience = 15;
    int lr_patience = 5;   // epochs without improvement before decaying the learning rate
    double lr_decay = 0.1;
    bool augment = true;
    bool freeze_backbone = false;

    SgdHyper sgd() const { return {learning_rate, momentum, weight_decay}; }

    /// Sets one key from a JSON value; throws InputError naming unknown keys
    /// and ill-typed values.
    void set(const std::string& key, const nlohmann::json& value);
    /// Sets one key from text ("0.01", "plant", "true", "" for unset).
    void set_text(const std::string& key, const std::string& text);
    void validate() const;

    nlohmann::json to_json() const;
    static TrainConfig from_json(const nlohmann::json& j);
    /// JSON object, or flat "key = value" lines ('#' starts a comment).
    static TrainConfig load(const std::filesystem::path& path);
};

}  // namespace ppnet
