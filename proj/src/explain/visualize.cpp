#include "ppnet/explain/visualize.hpp"

#include <algorithm>
#include <cmath>

#include "ppnet/core/error.hpp"
#include "ppnet/core/io.hpp"

namespace ppnet {

namespace {

// Channel indices of B04, B03 and B02 in the patch band order.
constexpr std::array<int, 3> kRgbChannels{2, 1, 0};

// Viridis sampled at t = 0, 1/8, ..., 1.
constexpr std::array<std::array<double, 3>, 9> kViridis{{{68, 1, 84},
                                                         {71, 44, 122},
                                                         {59, 81, 139},
                                                         {44, 113, 142},
                                                         {33, 144, 141},
                                                         {39, 173, 129},
                                                         {92, 200, 99},
                                                         {170, 220, 50},
                                                         {253, 231, 37}}};

double percentile(std::vector<float> sorted_values, double pct) {
    std::sort(sorted_values.begin(), sorted_values.end());
    const double pos = std::clamp(pct, 0.0, 100.0) / 100.0 * static_cast<double>(sorted_values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted_values.size() - 1);
    return sorted_values[lo] + (pos - static_cast<double>(lo)) * (sorted_values[hi] - sorted_values[lo]);
}

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

}  // namespace

RgbImage rgb_composite(const Tensor<float>& pixels, double lo_pct, double hi_pct) {
    if (pixels.rank() != 3 || pixels.dim(0) < 3) throw InputError("rgb_composite expects a C x H x W patch with C >= 3");
    if (!(lo_pct < hi_pct)) throw InputError("rgb_composite: lower percentile must be below the upper");
    const int h = pixels.dim(1), w = pixels.dim(2);
    const std::size_t plane = static_cast<std::size_t>(h) * w;
    std::vector<float> pooled;
    pooled.reserve(plane * 3);
    for (int ch : kRgbChannels) pooled.insert(pooled.end(), pixels.data() + ch * plane, pixels.data() + (ch + 1) * plane);
    const double lo = percentile(pooled, lo_pct), hi = percentile(pooled, hi_pct);
    RgbImage img(w, h);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            for (int k = 0; k < 3; ++k) {
                const double v = pixels.at(kRgbChannels[static_cast<std::size_t>(k)], r, c);
                img.at(r, c)[k] = hi > lo ? to_byte(255.0 * std::clamp((v - lo) / (hi - lo), 0.0, 1.0)) : 128;
            }
    return img;
}

std::array<std::uint8_t, 3> viridis(double t) {
    t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
    const double pos = t * 8.0;
    const int i = std::min(7, static_cast<int>(std::floor(pos)));
    const double f = pos - i;
    std::array<std::uint8_t, 3> out{};
    for (int k = 0; k < 3; ++k) {
        const double a = kViridis[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
        const double b = kViridis[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(k)];
        out[static_cast<std::size_t>(k)] = to_byte(a + (b - a) * f);
    }
    return out;
}

RgbImage colorize(const std::vector<double>& heatmap, int rows, int cols) {
    if (heatmap.size() != static_cast<std::size_t>(rows) * cols) throw InputError("colorize: heatmap size mismatch");
    RgbImage img(cols, rows);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const auto col = viridis(heatmap[static_cast<std::size_t>(r) * cols + c]);
            std::copy(col.begin(), col.end(), img.at(r, c));
        }
    return img;
}

RgbImage overlay(const RgbImage& rgb, const CamResult& cam, double alpha) {
    if (rgb.width != cam.cols || rgb.height != cam.rows)
        throw InputError("overlay: image is " + std::to_string(rgb.width) + "x" + std::to_string(rgb.height) + ", heatmap is " +
                         std::to_string(cam.cols) + "x" + std::to_string(cam.rows));
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("overlay: alpha must lie in [0, 1]");
    const RgbImage heat = colorize(cam.heatmap, cam.rows, cam.cols);
    RgbImage out(rgb.width, rgb.height);
    for (std::size_t i = 0; i < out.pixels.size(); ++i)
        out.pixels[i] = to_byte((1.0 - alpha) * rgb.pixels[i] + alpha * heat.pixels[i]);
    return out;
}

std::vector<std::filesystem::path> write_cam_outputs(const std::filesystem::path& dir, const std::string& name,
                                                     const Tensor<float>& reflectance, const CamResult& cam,
                                                     const std::string& class_name, double alpha,
                                                     const nlohmann::json& extra) {
    const RgbImage rgb = rgb_composite(reflectance);
    const std::vector<std::filesystem::path> paths{dir / (name + "_rgb.png"), dir / (name + "_cam.png"),
                                                   dir / (name + "_overlay.png"), dir / (name + ".json")};
    write_png(paths[0], rgb);
    write_png(paths[1], colorize(cam.heatmap, cam.rows, cam.cols));
    write_png(paths[2], overlay(rgb, cam, alpha));
    nlohmann::json meta = extra;
    meta["class_index"] = cam.class_index;
    meta["class_name"] = class_name;
    meta["logit"] = cam.logit;
    meta["constant_map"] = cam.constant;
    meta["raw_map_size"] = {cam.raw_rows, cam.raw_cols};
    meta["alpha"] = alpha;
    io::write_json(paths[3], meta);
    return paths;
}

}  // namespace ppnet
