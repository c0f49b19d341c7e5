#pragma once

#include <cstdint>
#include <vector>

#include "ppnet/dataset/manifest.hpp"

namespace ppnet {

/// Seed for epoch `epoch` derived from a base seed, so epochs can be drawn
/// independently (and in parallel) while staying reproducible.
std::uint64_t epoch_seed(std::uint64_t base_seed, std::uint64_t epoch);

/// Exactly `per_class` entry indices per class, shuffled. Classes with more
/// entries are subsampled without replacement; smaller classes contribute
/// every entry floor(per_class / n) times plus a without-replacement draw for
/// the remainder. Throws when a class has no entries in `split`.
std::vector<std::size_t> balanced_epoch(const DatasetManifest& manifest, Split split, int per_class,
                                        std::uint64_t seed);

int median_class_size(const DatasetManifest& manifest, Split split);
int min_class_size(const DatasetManifest& manifest, Split split);

}  // namespace ppnet
