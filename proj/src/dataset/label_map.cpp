#include "ppnet/dataset/label_map.hpp"

#include <algorithm>
#include <set>

#include "ppnet/core/error.hpp"

namespace ppnet {

std::string_view task_name(Task task) { return task == Task::Plant ? "plant" : "cooling"; }

Task parse_task(std::string_view text) {
    if (text == "plant" || text == "plant_11") return Task::Plant;
    if (text == "cooling" || text == "cooling_4") return Task::Cooling;
    throw InputError("unknown task '" + std::string(text) + "' (expected plant or cooling)");
}

LabelMap::LabelMap(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw InputError("label map is empty");
    if (std::set<std::string>(names_.begin(), names_.end()).size() != names_.size())
        throw InputError("label map has duplicate class names");
}

LabelMap LabelMap::plant() {
    std::vector<std::string> names;
    for (int i = 0; i < kPlantClassCount; ++i) names.emplace_back(plant_class_name(static_cast<PlantClass>(i)));
    names.emplace_back("Background");
    return LabelMap(std::move(names));
}

LabelMap LabelMap::cooling() {
    std::vector<std::string> names;
    for (int i = 0; i < kCoolingClassCount; ++i) names.emplace_back(cooling_class_name(static_cast<CoolingClass>(i)));
    return LabelMap(std::move(names));
}

LabelMap LabelMap::for_task(Task task) { return task == Task::Plant ? plant() : cooling(); }

std::optional<int> LabelMap::index(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<int>(it - names_.begin());
}

nlohmann::json LabelMap::to_json() const { return names_; }

LabelMap LabelMap::from_json(const nlohmann::json& j) { return LabelMap(j.get<std::vector<std::string>>()); }

int task_label(const Patch& patch, Task task) {
    if (task == Task::Plant) return patch.label;
    if (!patch.cooling_label) throw InputError("patch of site '" + patch.site_id + "' has no cooling label");
    return *patch.cooling_label;
}

}  // namespace ppnet
