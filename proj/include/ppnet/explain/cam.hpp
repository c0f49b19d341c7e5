#pragma once

#include <optional>
#include <vector>

#include "ppnet/core/tensor.hpp"
#include "ppnet/model/params.hpp"

namespace ppnet {

struct CamResult {
    int class_index = 0;
    double logit = 0.0;  // model logit of class_index
    double bias = 0.0;   // head bias of class_index
    int raw_rows = 0, raw_cols = 0;
    std::vector<double> raw_map;  // sum_c w[class, c] * activation[c], final-stage resolution
    int rows = 0, cols = 0;
    std::vector<double> heatmap;  // raw_map upsampled to the input size, min-max scaled to [0, 1]
    bool constant = false;        // raw_map had no spread; heatmap is all zeros
};

/// Class activation map of a normalised C x H x W input. Without a class,
/// the predicted (argmax) class is used.
template <typename T>
CamResult compute_cam(const BasicModelParams<T>& params, const Tensor<T>& input, std::optional<int> class_index = {});

/// Bilinear upsampling plus min-max scaling of a raw map (exposed for tests).
std::vector<double> cam_heatmap(const std::vector<double>& raw, int raw_rows, int raw_cols, int rows, int cols,
                                bool* constant = nullptr);

}  // namespace ppnet
