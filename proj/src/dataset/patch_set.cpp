#include "ppnet/dataset/patch_set.hpp"

#include "ppnet/core/error.hpp"
#include "ppnet/ingest/patch_io.hpp"

namespace ppnet {

std::string_view stats_scope_name(StatsScope scope) { return scope == StatsScope::All ? "all" : "train"; }

StatsScope parse_stats_scope(std::string_view text) {
    if (text == "all") return StatsScope::All;
    if (text == "train") return StatsScope::Train;
    throw InputError("unknown stats scope '" + std::string(text) + "' (expected all or train)");
}

PatchSet load_patch_set(const DatasetManifest& manifest) {
    if (!manifest.norm_stats) throw InputError("manifest has no normalisation statistics");
    PatchSet set;
    set.manifest = manifest;
    set.images.resize(manifest.entries.size());
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
        const Patch p = read_patch(manifest.entries[i].path);
        set.images[i] = normalize(p.pixels, *manifest.norm_stats);
    }
    return set;
}

PatchSet make_patch_set(std::span<const Patch> patches, Task task, std::uint64_t split_seed, Granularity granularity,
                        StatsScope scope, std::array<double, 3> fractions) {
    const LabelMap labels = LabelMap::for_task(task);
    std::vector<PatchInfo> info;
    info.reserve(patches.size());
    for (const auto& p : patches) info.push_back({"", p.site_id, task_label(p, task)});
    PatchSet set;
    set.manifest = split_dataset(info, labels, task, fractions, split_seed, granularity);
    set.manifest.stats_scope = std::string(stats_scope_name(scope));

    NormAccumulator acc;
    for (std::size_t i = 0; i < patches.size(); ++i)
        if (scope == StatsScope::All || set.manifest.entries[i].split == Split::Train) acc.add(patches[i].pixels);
    set.manifest.norm_stats = acc.finish();

    set.images.resize(patches.size());
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < patches.size(); ++i) set.images[i] = normalize(patches[i].pixels, *set.manifest.norm_stats);
    return set;
}

NormStats stats_from_manifest(const DatasetManifest& manifest, StatsScope scope) {
    NormAccumulator acc;
    for (const auto& e : manifest.entries)
        if (scope == StatsScope::All || e.split == Split::Train) acc.add(read_patch(e.path).pixels);
    return acc.finish();
}

}  // namespace ppnet
