#include "ppnet/evaluation/evaluate.hpp"

#include <cmath>
#include <map>

#include "ppnet/core/error.hpp"
#include "ppnet/dataset/sampling.hpp"
#include "ppnet/training/trainer.hpp"

namespace ppnet {

nlohmann::json EvaluationReport::to_json() const {
    return {{"task", std::string(task_name(task))},
            {"label_map", label_map.to_json()},
            {"split", split},
            {"mean_confusion", mean_confusion},
            {"std_confusion", std_confusion},
            {"per_class_accuracy", per_class_accuracy},
            {"overall_accuracy", overall_accuracy},
            {"n_draws", n_draws},
            {"per_class", per_class},
            {"seed", seed}};
}

EvaluationReport EvaluationReport::from_json(const nlohmann::json& j) {
    try {
        EvaluationReport r;
        r.task = parse_task(j.at("task").get<std::string>());
        r.label_map = LabelMap::from_json(j.at("label_map"));
        r.split = j.at("split").get<std::string>();
        r.mean_confusion = j.at("mean_confusion").get<std::vector<std::vector<double>>>();
        r.std_confusion = j.at("std_confusion").get<std::vector<std::vector<double>>>();
        r.per_class_accuracy = j.at("per_class_accuracy").get<std::vector<double>>();
        r.overall_accuracy = j.at("overall_accuracy").get<double>();
        r.n_draws = j.at("n_draws").get<int>();
        r.per_class = j.at("per_class").get<int>();
        r.seed = j.at("seed").get<std::uint64_t>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed evaluation report: ") + e.what());
    }
}

namespace {

EvaluationReport finish_report(const DatasetManifest& manifest, const EvaluationOptions& options, int per_class,
                               const std::vector<std::vector<std::vector<double>>>& draws) {
    const int c = manifest.label_map.size();
    const auto n = static_cast<double>(draws.size());
    EvaluationReport r;
    r.task = manifest.task;
    r.label_map = manifest.label_map;
    r.split = std::string(split_name(options.split));
    r.n_draws = options.n_draws;
    r.per_class = per_class;
    r.seed = options.seed;
    r.mean_confusion.assign(static_cast<std::size_t>(c), std::vector<double>(static_cast<std::size_t>(c), 0.0));
    r.std_confusion = r.mean_confusion;
    for (int a = 0; a < c; ++a)
        for (int b = 0; b < c; ++b) {
            double mean = 0.0;
            for (const auto& d : draws) mean += d[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
            mean /= n;
            double ss = 0.0;
            for (const auto& d : draws) {
                const double e = d[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] - mean;
                ss += e * e;
            }
            r.mean_confusion[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = mean;
            r.std_confusion[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = std::sqrt(ss / (n - 1.0));
        }
    for (int a = 0; a < c; ++a) r.per_class_accuracy.push_back(r.mean_confusion[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)]);
    double sum = 0.0;
    for (double v : r.per_class_accuracy) sum += v;
    r.overall_accuracy = sum / c;
    return r;
}

template <typename Predict>
EvaluationReport run_draws(const DatasetManifest& manifest, const EvaluationOptions& options, Predict&& predict) {
    if (options.n_draws < 2)
        throw InputError("n_draws must be at least 2 for a standard deviation, got " + std::to_string(options.n_draws));
    const int per_class = options.per_class > 0 ? options.per_class : min_class_size(manifest, options.split);
    const int c = manifest.label_map.size();
    std::vector<std::vector<std::vector<double>>> draws;
    for (int d = 0; d < options.n_draws; ++d) {
        const auto refs = balanced_epoch(manifest, options.split, per_class, epoch_seed(options.seed, static_cast<std::uint64_t>(d)));
        std::vector<std::vector<double>> counts(static_cast<std::size_t>(c), std::vector<double>(static_cast<std::size_t>(c), 0.0));
        for (std::size_t e : refs) {
            const int p = predict(e);
            if (p < 0 || p >= c) throw InputError("classifier returned class " + std::to_string(p) + " outside [0, " + std::to_string(c) + ")");
            counts[static_cast<std::size_t>(manifest.entries[e].label)][static_cast<std::size_t>(p)] += 1.0;
        }
        for (auto& row : counts)
            for (auto& v : row) v = 100.0 * v / per_class;
        draws.push_back(std::move(counts));
    }
    return finish_report(manifest, options, per_class, draws);
}

}  // namespace

EvaluationReport evaluate_classifier(const DatasetManifest& manifest, const EntryClassifier& classify,
                                     const EvaluationOptions& options) {
    return run_draws(manifest, options, classify);
}

EvaluationReport evaluate(const ModelParams& params, const PatchSet& data, const EvaluationOptions& options) {
    if (params.spec.num_classes != data.num_classes())
        throw InputError("model predicts " + std::to_string(params.spec.num_classes) + " classes, dataset has " +
                         std::to_string(data.num_classes()));
    const auto entries = data.manifest.indices(options.split);
    const auto predictions = predict_entries(params, data, entries);
    std::map<std::size_t, int> cache;
    for (std::size_t i = 0; i < entries.size(); ++i) cache[entries[i]] = predictions[i];
    return run_draws(data.manifest, options, [&](std::size_t e) { return cache.at(e); });
}

EvaluationReport evaluate_cooling(const ModelParams& params, const PatchSet& data, const EvaluationOptions& options) {
    if (data.manifest.task != Task::Cooling) throw InputError("evaluate_cooling needs a cooling-task dataset");
    return evaluate(params, data, options);
}

}  // namespace ppnet
