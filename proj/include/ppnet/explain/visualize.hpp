#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppnet/core/image.hpp"
#include "ppnet/core/tensor.hpp"
#include "ppnet/explain/cam.hpp"

namespace ppnet {

/// True-colour composite of a reflectance patch: B04, B03, B02 map to R, G,
/// B. The three bands share one contrast stretch from the `lo_pct` to the
/// `hi_pct` percentile of their pooled values (linear interpolation between
/// order statistics). A patch without spread renders as uniform grey 128.
RgbImage rgb_composite(const Tensor<float>& pixels, double lo_pct = 2.0, double hi_pct = 98.0);

/// Perceptually uniform (viridis) colour for t in [0, 1].
std::array<std::uint8_t, 3> viridis(double t);
RgbImage colorize(const std::vector<double>& heatmap, int rows, int cols);

/// (1 - alpha) * rgb + alpha * viridis(heatmap), rounded per channel.
RgbImage overlay(const RgbImage& rgb, const CamResult& cam, double alpha);

/// Writes <name>_rgb.png, <name>_cam.png, <name>_overlay.png and the
/// sidecar <name>.json (class, logit, flags) under `dir`.
std::vector<std::filesystem::path> write_cam_outputs(const std::filesystem::path& dir, const std::string& name,
                                                     const Tensor<float>& reflectance, const CamResult& cam,
                                                     const std::string& class_name, double alpha,
                                                     const nlohmann::json& extra = nlohmann::json::object());

}  // namespace ppnet
