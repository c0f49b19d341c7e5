#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppnet/dataset/patch_set.hpp"
#include "ppnet/model/params.hpp"

namespace ppnet {

/// Confusion statistics over repeated balanced draws.
///
/// Reference figures at catalogue scale (about 20k real patches of 450 sites
/// with EuroSAT pretraining): 90.0% mean accuracy over the eleven plant-task
/// classes (Background 77.4%, Solar 97.5%) and 87.5% over the four cooling
/// classes (MechanicalDraftTower 70.0%, OnceThrough 99%). Desk-scale runs on
/// synthetic fixtures are not comparable with these numbers.
struct EvaluationReport {
    Task task = Task::Plant;
    LabelMap label_map;
    std::string split = "test";
    /// Row = true class; entry = mean percentage of the row predicted as the column.
    std::vector<std::vector<double>> mean_confusion;
    /// Sample standard deviation (n - 1) across draws.
    std::vector<std::vector<double>> std_confusion;
    std::vector<double> per_class_accuracy;
    double overall_accuracy = 0.0;  // unweighted mean of per_class_accuracy
    int n_draws = 10;
    int per_class = 0;
    std::uint64_t seed = 0;

    int classes() const { return label_map.size(); }
    nlohmann::json to_json() const;
    static EvaluationReport from_json(const nlohmann::json& j);
};

struct EvaluationOptions {
    Split split = Split::Test;
    int n_draws = 10;
    int per_class = 0;  // 0: smallest class of the split
    std::uint64_t seed = 0;
};

/// Predicts the class of one manifest entry.
using EntryClassifier = std::function<int(std::size_t entry)>;

/// Draw d (0-based) uses balanced_epoch(manifest, split, per_class,
/// epoch_seed(seed, d)). The classifier is called once per drawn reference,
/// in draw order.
EvaluationReport evaluate_classifier(const DatasetManifest& manifest, const EntryClassifier& classify,
                                     const EvaluationOptions& options = {});

/// Model evaluation; each distinct patch is predicted once (eval mode).
EvaluationReport evaluate(const ModelParams& params, const PatchSet& data, const EvaluationOptions& options = {});
/// evaluate() restricted to four-class cooling datasets.
EvaluationReport evaluate_cooling(const ModelParams& params, const PatchSet& data, const EvaluationOptions& options = {});

}  // namespace ppnet
