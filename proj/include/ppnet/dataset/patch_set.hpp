#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ppnet/core/tensor.hpp"
#include "ppnet/dataset/manifest.hpp"

namespace ppnet {

/// A manifest together with its normalised images, parallel to
/// manifest.entries.
struct PatchSet {
    DatasetManifest manifest;
    std::vector<Tensor<float>> images;

    const Tensor<float>& image(std::size_t entry) const { return images.at(entry); }
    int num_classes() const { return manifest.label_map.size(); }
};

/// Reads every patch named by the manifest and normalises it with the
/// manifest's stats. Throws when the manifest has no stats.
PatchSet load_patch_set(const DatasetManifest& manifest);

/// Which patches feed the normalisation statistics.
enum class StatsScope { All, Train };
std::string_view stats_scope_name(StatsScope scope);
StatsScope parse_stats_scope(std::string_view text);

/// Splits in-memory patches, computes stats over `scope` and normalises.
PatchSet make_patch_set(std::span<const Patch> patches, Task task, std::uint64_t split_seed,
                        Granularity granularity = Granularity::PerImage, StatsScope scope = StatsScope::All,
                        std::array<double, 3> fractions = {0.8, 0.1, 0.1});

/// Normalisation statistics of the manifest's patches in `scope`, read in a
/// single streaming pass from disk.
NormStats stats_from_manifest(const DatasetManifest& manifest, StatsScope scope);

}  // namespace ppnet
