#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppnet/ingest/types.hpp"

namespace ppnet {

enum class Task { Plant, Cooling };

std::string_view task_name(Task task);
/// Accepts "plant", "plant_11", "cooling", "cooling_4".
Task parse_task(std::string_view text);

/// Bidirectional class name <-> index map.
class LabelMap {
public:
    LabelMap() = default;
    explicit LabelMap(std::vector<std::string> names);

    /// Ten plant classes followed by "Background".
    static LabelMap plant();
    static LabelMap cooling();
    static LabelMap for_task(Task task);

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int index) const { return names_.at(static_cast<std::size_t>(index)); }
    std::optional<int> index(std::string_view name) const;
    const std::vector<std::string>& names() const { return names_; }

    nlohmann::json to_json() const;
    static LabelMap from_json(const nlohmann::json& j);
    bool operator==(const LabelMap&) const = default;

private:
    std::vector<std::string> names_;
};

/// The patch's label for `task`; throws when a cooling label is absent.
int task_label(const Patch& patch, Task task);

}  // namespace ppnet
