#include "ppnet/training/config.hpp"

#include <cmath>
#include <sstream>

#include "ppnet/core/error.hpp"
#include "ppnet/core/io.hpp"
#include "ppnet/model/model_spec.hpp"

namespace ppnet {

namespace {

template <typename V>
V typed(const std::string& key, const nlohmann::json& value) {
    try {
        if constexpr (std::is_same_v<V, bool>) {
            if (!value.is_boolean()) throw InputError("");
        } else if constexpr (std::is_integral_v<V>) {
            if (!value.is_number_integer()) throw InputError("");
        } else if constexpr (std::is_floating_point_v<V>) {
            if (!value.is_number()) throw InputError("");
        } else {
            if (!value.is_string()) throw InputError("");
        }
        return value.get<V>();
    } catch (const std::exception&) {
        throw InputError("config key '" + key + "' has an invalid value: " + value.dump());
    }
}

template <typename V>
std::optional<V> optional_typed(const std::string& key, const nlohmann::json& value) {
    if (value.is_null()) return std::nullopt;
    return typed<V>(key, value);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace

void TrainConfig::set(const std::string& key, const nlohmann::json& value) {
    if (key == "task") task = parse_task(typed<std::string>(key, value));
    else if (key == "model") model = typed<std::string>(key, value);
    else if (key == "learning_rate") learning_rate = typed<double>(key, value);
    else if (key == "momentum") momentum = typed<double>(key, value);
    else if (key == "weight_decay") weight_decay = typed<double>(key, value);
    else if (key == "batch_size") batch_size = typed<int>(key, value);
    else if (key == "epochs") epochs = typed<int>(key, value);
    else if (key == "per_class") per_class = optional_typed<int>(key, value);
    else if (key == "val_per_class") val_per_class = optional_typed<int>(key, value);
    else if (key == "init_seed") init_seed = typed<std::uint64_t>(key, value);
    else if (key == "sampler_seed") sampler_seed = typed<std::uint64_t>(key, value);
    else if (key == "pretrained") pretrained = optional_typed<std::string>(key, value);
    else if (key == "early_stop_patience") early_stop_patience = optional_typed<int>(key, value);
    else if (key == "lr_patience") lr_patience = typed<int>(key, value);
    else if (key == "lr_decay") lr_decay = typed<double>(key, value);
    else if (key == "augment") augment = typed<bool>(key, value);
    else if (key == "freeze_backbone") freeze_backbone = typed<bool>(key, value);
    else throw InputError("unknown config key '" + key + "'");
}

void TrainConfig::set_text(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) {
        set(key, nullptr);
        return;
    }
    nlohmann::json value = nlohmann::json::parse(t, nullptr, false);
    if (value.is_discarded()) value = t;
    set(key, value);
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw InputError("learning_rate must be positive");
    if (!(momentum >= 0.0 && momentum < 1.0)) throw InputError("momentum must lie in [0, 1)");
    if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) throw InputError("weight_decay must be nonnegative");
    if (batch_size <= 0) throw InputError("batch_size must be positive");
    if (epochs <= 0) throw InputError("epochs must be positive");
    if (per_class && *per_class <= 0) throw InputError("per_class must be positive");
    if (val_per_class && *val_per_class <= 0) throw InputError("val_per_class must be positive");
    if (early_stop_patience && *early_stop_patience <= 0) throw InputError("early_stop_patience must be positive");
    if (lr_patience <= 0) throw InputError("lr_patience must be positive");
    if (!(lr_decay > 0.0 && lr_decay <= 1.0)) throw InputError("lr_decay must lie in (0, 1]");
    const int classes = LabelMap::for_task(task).size();
    if (per_class && batch_size > *per_class * classes)
        throw InputError("batch_size " + std::to_string(batch_size) + " exceeds per_class x classes = " +
                         std::to_string(*per_class * classes));
    ModelSpec::preset(model, classes);
}

nlohmann::json TrainConfig::to_json() const {
    auto opt = [](const auto& o) { return o ? nlohmann::json(*o) : nlohmann::json(nullptr); };
    return {{"task", std::string(task_name(task))},
            {"model", model},
            {"learning_rate", learning_rate},
            {"momentum", momentum},
            {"weight_decay", weight_decay},
            {"batch_size", batch_size},
            {"epochs", epochs},
            {"per_class", opt(per_class)},
            {"val_per_class", opt(val_per_class)},
            {"init_seed", init_seed},
            {"sampler_seed", sampler_seed},
            {"pretrained", opt(pretrained)},
            {"early_stop_patience", opt(early_stop_patience)},
            {"lr_patience", lr_patience},
            {"lr_decay", lr_decay},
            {"augment", augment},
            {"freeze_backbone", freeze_backbone}};
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InputError("config must be a JSON object");
    TrainConfig c;
    for (const auto& [key, value] : j.items()) c.set(key, value);
    return c;
}

TrainConfig TrainConfig::load(const std::filesystem::path& path) {
    const std::string text = io::read_file(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        const auto j = nlohmann::json::parse(text, nullptr, false);
        if (j.is_discarded()) throw InputError("invalid JSON in " + path.string());
        return from_json(j);
    }
    TrainConfig c;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InputError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
        c.set_text(trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return c;
}

}  // namespace ppnet
