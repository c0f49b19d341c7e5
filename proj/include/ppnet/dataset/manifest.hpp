#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppnet/dataset/label_map.hpp"
#include "ppnet/dataset/normalization.hpp"

namespace ppnet {

enum class Split { Train, Val, Test };
enum class Granularity { PerImage, PerSite };

std::string_view split_name(Split split);
Split parse_split(std::string_view text);
std::string_view granularity_name(Granularity g);
Granularity parse_granularity(std::string_view text);

struct ManifestEntry {
    std::string path;  // patch container; may be empty for in-memory datasets
    std::string site_id;
    int label = 0;
    Split split = Split::Train;
};

/// Patch description consumed by split_dataset.
struct PatchInfo {
    std::string path;
    std::string site_id;
    int label = 0;
};

struct DatasetManifest {
    Task task = Task::Plant;
    LabelMap label_map = LabelMap::plant();
    std::vector<ManifestEntry> entries;
    std::optional<NormStats> norm_stats;
    std::string stats_scope = "all";
    std::array<double, 3> fractions{0.8, 0.1, 0.1};
    std::uint64_t seed = 0;
    Granularity granularity = Granularity::PerImage;

    std::vector<std::size_t> indices(Split split) const;
    /// Entry indices of `split` grouped by class label.
    std::vector<std::vector<std::size_t>> by_class(Split split) const;

    nlohmann::json to_json() const;
    static DatasetManifest from_json(const nlohmann::json& j);
    /// Patch paths are stored relative to the manifest's directory.
    void save(const std::filesystem::path& path) const;
    static DatasetManifest load(const std::filesystem::path& path);
};

/// Stratified random split. Per class, the units (single patches, or all
/// patches of one site for PerSite) are shuffled and cut by largest-remainder
/// rounding of the fractions. An empty split borrows one unit from the
/// largest when every count stays within one unit of its quota. Throws when
/// a class would still leave a split empty.
DatasetManifest split_dataset(std::span<const PatchInfo> patches, const LabelMap& labels, Task task,
                              std::array<double, 3> fractions, std::uint64_t seed,
                              Granularity granularity = Granularity::PerImage);

}  // namespace ppnet
