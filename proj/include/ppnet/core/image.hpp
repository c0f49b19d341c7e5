#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace ppnet {

/// Bilinear resize of a single-channel row-major grid.
///
/// Pixel centres are aligned (output sample i maps to input coordinate
/// (i + 0.5) * in / out - 0.5), and coordinates outside the grid are clamped
/// to the border. Every output value is a convex combination of input values,
/// and for integer upscale factors the corner samples equal the input corners.
std::vector<float> resize_bilinear(std::span<const float> grid, int rows, int cols, int out_rows, int out_cols);
std::vector<double> resize_bilinear(std::span<const double> grid, int rows, int cols, int out_rows, int out_cols);

/// Same sampling as resize_bilinear but only evaluates the window
/// [row0, row0 + out_rows) x [col0, col0 + out_cols) of a full
/// (rows * scale) x (cols * scale) upsampled grid.
std::vector<float> upsample_window(std::span<const float> grid, int rows, int cols, int scale, int row0, int col0,
                                   int out_rows, int out_cols);

/// 8-bit interleaved RGB image.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // height * width * 3

    RgbImage() = default;
    RgbImage(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, 0) {}

    std::uint8_t* at(int row, int col) { return &pixels[(static_cast<std::size_t>(row) * width + col) * 3]; }
    const std::uint8_t* at(int row, int col) const {
        return &pixels[(static_cast<std::size_t>(row) * width + col) * 3];
    }
    bool operator==(const RgbImage&) const = default;
};

void write_png(const std::filesystem::path& path, const RgbImage& image);
void write_png_gray(const std::filesystem::path& path, int width, int height, std::span<const std::uint8_t> gray);

}  // namespace ppnet
