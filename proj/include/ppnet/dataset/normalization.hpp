#pragma once

#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppnet/core/tensor.hpp"
#include "ppnet/ingest/types.hpp"

namespace ppnet {

/// Per-band mean and population standard deviation (reflectance units).
struct NormStats {
    std::vector<double> mean;
    std::vector<double> std;

    std::size_t channels() const { return mean.size(); }
    /// Throws unless both vectors have `channels` entries and std > 0.
    void validate(std::size_t channels = kPatchChannels) const;

    nlohmann::json to_json() const;
    static NormStats from_json(const nlohmann::json& j);
    bool operator==(const NormStats&) const = default;
};

/// Streaming per-band moments. Each added image is reduced to its own mean
/// and centred sum of squares, then merged with Chan's parallel update, so a
/// single pass over arbitrarily many images stays numerically stable.
class NormAccumulator {
public:
    explicit NormAccumulator(std::size_t channels = kPatchChannels);
    void add(const Tensor<float>& image);  // channel x row x column
    void merge(const NormAccumulator& other);
    std::size_t images() const { return images_; }
    /// Throws when fewer than two images were added or a band has zero variance.
    NormStats finish() const;

private:
    std::size_t images_ = 0;
    std::vector<double> count_, mean_, m2_;
};

NormStats compute_norm_stats(std::span<const Patch> patches);

/// (x - mean[b]) / std[b] per band.
Tensor<float> normalize(const Tensor<float>& image, const NormStats& stats);
Tensor<float> denormalize(const Tensor<float>& image, const NormStats& stats);

}  // namespace ppnet
