#include "ppnet/dataset/sampling.hpp"

#include <algorithm>

#include "ppnet/core/error.hpp"
#include "ppnet/core/random.hpp"

namespace ppnet {

std::uint64_t epoch_seed(std::uint64_t base_seed, std::uint64_t epoch) { return mix_seed(base_seed, epoch); }

namespace {

std::vector<std::vector<std::size_t>> non_empty_classes(const DatasetManifest& manifest, Split split) {
    auto groups = manifest.by_class(split);
    for (std::size_t c = 0; c < groups.size(); ++c)
        if (groups[c].empty())
            throw InputError("class '" + manifest.label_map.name(static_cast<int>(c)) + "' is absent from the " +
                             std::string(split_name(split)) + " split");
    return groups;
}

}  // namespace

std::vector<std::size_t> balanced_epoch(const DatasetManifest& manifest, Split split, int per_class,
                                        std::uint64_t seed) {
    if (per_class <= 0) throw InputError("per_class must be positive");
    auto groups = non_empty_classes(manifest, split);
    Rng rng(seed);
    std::vector<std::size_t> out;
    out.reserve(groups.size() * static_cast<std::size_t>(per_class));
    for (auto& members : groups) {
        const std::size_t n = members.size(), want = static_cast<std::size_t>(per_class);
        for (std::size_t rep = 0; rep < want / n; ++rep) out.insert(out.end(), members.begin(), members.end());
        std::shuffle(members.begin(), members.end(), rng);
        out.insert(out.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(want % n));
    }
    std::shuffle(out.begin(), out.end(), rng);
    return out;
}

int median_class_size(const DatasetManifest& manifest, Split split) {
    const auto groups = non_empty_classes(manifest, split);
    std::vector<int> sizes;
    for (const auto& g : groups) sizes.push_back(static_cast<int>(g.size()));
    std::sort(sizes.begin(), sizes.end());
    const std::size_t k = sizes.size();
    return k % 2 ? sizes[k / 2] : (sizes[k / 2 - 1] + sizes[k / 2]) / 2;
}

int min_class_size(const DatasetManifest& manifest, Split split) {
    const auto groups = non_empty_classes(manifest, split);
    std::size_t m = groups.front().size();
    for (const auto& g : groups) m = std::min(m, g.size());
    return static_cast<int>(m);
}

}  // namespace ppnet
