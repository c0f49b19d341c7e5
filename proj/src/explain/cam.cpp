#include "ppnet/explain/cam.hpp"

#include <algorithm>

#include "ppnet/core/error.hpp"
#include "ppnet/core/image.hpp"
#include "ppnet/model/layers.hpp"
#include "ppnet/model/network.hpp"

namespace ppnet {

std::vector<double> cam_heatmap(const std::vector<double>& raw, int raw_rows, int raw_cols, int rows, int cols,
                                bool* constant) {
    const std::vector<double> up = resize_bilinear(std::span<const double>(raw), raw_rows, raw_cols, rows, cols);
    const auto [lo_it, hi_it] = std::minmax_element(up.begin(), up.end());
    const double lo = *lo_it, hi = *hi_it;
    std::vector<double> heat(up.size(), 0.0);
    const bool flat = !(hi > lo);
    if (constant) *constant = flat;
    if (flat) return heat;
    for (std::size_t i = 0; i < up.size(); ++i) heat[i] = (up[i] - lo) / (hi - lo);
    return heat;
}

template <typename T>
CamResult compute_cam(const BasicModelParams<T>& params, const Tensor<T>& input, std::optional<int> class_index) {
    const auto fm = feature_maps(params, input);
    const Tensor<T>& act = fm.activations;
    const int channels = act.dim(0), h = act.dim(1), w = act.dim(2);

    Tensor<T> batch = act;
    batch.reshape({1, channels, h, w});
    const Tensor<T> logits = layers::linear_forward(layers::global_avg_pool(batch), fm.head_weight, fm.head_bias);
    const int classes = logits.dim(1);
    const int k = class_index ? *class_index : argmax_rows(logits).front();
    if (k < 0 || k >= classes)
        throw InputError("class index " + std::to_string(k) + " outside [0, " + std::to_string(classes) + ")");

    CamResult r;
    r.class_index = k;
    r.logit = logits[static_cast<std::size_t>(k)];
    r.bias = fm.head_bias[static_cast<std::size_t>(k)];
    r.raw_rows = h;
    r.raw_cols = w;
    r.raw_map.assign(static_cast<std::size_t>(h) * w, 0.0);
    const std::size_t plane = static_cast<std::size_t>(h) * w;
    for (int c = 0; c < channels; ++c) {
        const double wk = fm.head_weight[static_cast<std::size_t>(k) * channels + c];
        if (wk == 0.0) continue;
        const T* a = act.data() + static_cast<std::size_t>(c) * plane;
        for (std::size_t i = 0; i < plane; ++i) r.raw_map[i] += wk * a[i];
    }
    r.rows = input.dim(1);
    r.cols = input.dim(2);
    r.heatmap = cam_heatmap(r.raw_map, h, w, r.rows, r.cols, &r.constant);
    return r;
}

template CamResult compute_cam(const BasicModelParams<float>&, const Tensor<float>&, std::optional<int>);
template CamResult compute_cam(const BasicModelParams<double>&, const Tensor<double>&, std::optional<int>);

}  // namespace ppnet
