#include "ppnet/dataset/normalization.hpp"

#include <cmath>

#include "ppnet/core/error.hpp"

namespace ppnet {

void NormStats::validate(std::size_t channels) const {
    if (mean.size() != channels || std.size() != channels)
        throw InputError("normalisation statistics must have " + std::to_string(channels) + " bands");
    for (std::size_t b = 0; b < channels; ++b)
        if (!(std[b] > 0.0) || !std::isfinite(std[b]) || !std::isfinite(mean[b]))
            throw InputError("invalid normalisation statistics for band " + std::to_string(b));
}

nlohmann::json NormStats::to_json() const { return {{"mean", mean}, {"std", std}}; }

NormStats NormStats::from_json(const nlohmann::json& j) {
    NormStats s{j.at("mean").get<std::vector<double>>(), j.at("std").get<std::vector<double>>()};
    s.validate(s.mean.size());
    return s;
}

NormAccumulator::NormAccumulator(std::size_t channels)
    : count_(channels, 0.0), mean_(channels, 0.0), m2_(channels, 0.0) {}

void NormAccumulator::add(const Tensor<float>& image) {
    if (image.rank() != 3 || static_cast<std::size_t>(image.dim(0)) != mean_.size())
        throw InputError("image has " + shape_string(image.shape()) + ", expected " + std::to_string(mean_.size()) +
                         " channels");
    const std::size_t plane = static_cast<std::size_t>(image.dim(1)) * image.dim(2);
    for (std::size_t b = 0; b < mean_.size(); ++b) {
        const float* v = image.data() + b * plane;
        double sum = 0.0;
        for (std::size_t i = 0; i < plane; ++i) sum += v[i];
        const double mb = sum / static_cast<double>(plane);
        double m2b = 0.0;
        for (std::size_t i = 0; i < plane; ++i) {
            const double d = v[i] - mb;
            m2b += d * d;
        }
        const double na = count_[b], nb = static_cast<double>(plane), n = na + nb;
        const double delta = mb - mean_[b];
        mean_[b] += delta * nb / n;
        m2_[b] += m2b + delta * delta * na * nb / n;
        count_[b] = n;
    }
    ++images_;
}

void NormAccumulator::merge(const NormAccumulator& other) {
    if (other.mean_.size() != mean_.size()) throw InputError("cannot merge accumulators of different band counts");
    for (std::size_t b = 0; b < mean_.size(); ++b) {
        const double na = count_[b], nb = other.count_[b], n = na + nb;
        if (nb == 0.0) continue;
        const double delta = other.mean_[b] - mean_[b];
        mean_[b] += delta * nb / n;
        m2_[b] += other.m2_[b] + delta * delta * na * nb / n;
        count_[b] = n;
    }
    images_ += other.images_;
}

NormStats NormAccumulator::finish() const {
    if (images_ < 2) throw InputError("normalisation statistics need at least 2 images, got " + std::to_string(images_));
    NormStats s;
    s.mean = mean_;
    s.std.resize(mean_.size());
    for (std::size_t b = 0; b < mean_.size(); ++b) {
        s.std[b] = std::sqrt(m2_[b] / count_[b]);
        if (!(s.std[b] > 0.0))
            throw InputError("band " + std::to_string(b) +
                             (b < kPatchBands.size() ? " (" + std::string(kPatchBands[b]) + ")" : std::string()) +
                             " has zero variance; refusing to emit std = 0");
    }
    return s;
}

NormStats compute_norm_stats(std::span<const Patch> patches) {
    NormAccumulator acc;
    for (const auto& p : patches) acc.add(p.pixels);
    return acc.finish();
}

namespace {

Tensor<float> apply(const Tensor<float>& image, const NormStats& stats, bool forward) {
    if (image.rank() != 3) throw InputError("expected a channel x row x column image");
    stats.validate(static_cast<std::size_t>(image.dim(0)));
    Tensor<float> out(image.shape());
    const std::size_t plane = static_cast<std::size_t>(image.dim(1)) * image.dim(2);
    for (std::size_t b = 0; b < stats.channels(); ++b) {
        const double m = stats.mean[b], s = stats.std[b];
        const float* in = image.data() + b * plane;
        float* o = out.data() + b * plane;
        for (std::size_t i = 0; i < plane; ++i)
            o[i] = static_cast<float>(forward ? (in[i] - m) / s : in[i] * s + m);
    }
    return out;
}

}  // namespace

Tensor<float> normalize(const Tensor<float>& image, const NormStats& stats) { return apply(image, stats, true); }
Tensor<float> denormalize(const Tensor<float>& image, const NormStats& stats) { return apply(image, stats, false); }

}  // namespace ppnet
