#include "ppnet/core/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include <png.h>

#include "ppnet/core/error.hpp"

namespace ppnet {

namespace {

struct Tap {
    int lo;
    int hi;
    double frac;
};

Tap tap_for(int dst, double ratio, int in_size) {
    double src = (dst + 0.5) * ratio - 0.5;
    src = std::clamp(src, 0.0, static_cast<double>(in_size - 1));
    const int lo = static_cast<int>(std::floor(src));
    const int hi = std::min(lo + 1, in_size - 1);
    return {lo, hi, src - lo};
}

template <typename T>
T sample(std::span<const T> grid, int cols, const Tap& ty, const Tap& tx) {
    const double v00 = grid[static_cast<std::size_t>(ty.lo) * cols + tx.lo];
    const double v01 = grid[static_cast<std::size_t>(ty.lo) * cols + tx.hi];
    const double v10 = grid[static_cast<std::size_t>(ty.hi) * cols + tx.lo];
    const double v11 = grid[static_cast<std::size_t>(ty.hi) * cols + tx.hi];
    const double top = v00 + (v01 - v00) * tx.frac;
    const double bottom = v10 + (v11 - v10) * tx.frac;
    return static_cast<T>(top + (bottom - top) * ty.frac);
}

template <typename T>
void check_grid(std::span<const T> grid, int rows, int cols) {
    if (rows <= 0 || cols <= 0) throw InputError("bilinear resize: empty grid");
    if (grid.size() != static_cast<std::size_t>(rows) * cols)
        throw InputError("bilinear resize: grid size does not match dimensions");
}

template <typename T>
std::vector<T> resize_impl(std::span<const T> grid, int rows, int cols, int out_rows, int out_cols) {
    check_grid(grid, rows, cols);
    if (out_rows <= 0 || out_cols <= 0) throw InputError("bilinear resize: empty output");
    const double ry = static_cast<double>(rows) / out_rows;
    const double rx = static_cast<double>(cols) / out_cols;
    std::vector<Tap> xs(out_cols);
    for (int j = 0; j < out_cols; ++j) xs[j] = tap_for(j, rx, cols);
    std::vector<T> out(static_cast<std::size_t>(out_rows) * out_cols);
    for (int i = 0; i < out_rows; ++i) {
        const Tap ty = tap_for(i, ry, rows);
        for (int j = 0; j < out_cols; ++j) out[static_cast<std::size_t>(i) * out_cols + j] = sample(grid, cols, ty, xs[j]);
    }
    return out;
}

}  // namespace

std::vector<float> resize_bilinear(std::span<const float> grid, int rows, int cols, int out_rows, int out_cols) {
    return resize_impl(grid, rows, cols, out_rows, out_cols);
}

std::vector<double> resize_bilinear(std::span<const double> grid, int rows, int cols, int out_rows, int out_cols) {
    return resize_impl(grid, rows, cols, out_rows, out_cols);
}

std::vector<float> upsample_window(std::span<const float> grid, int rows, int cols, int scale, int row0, int col0,
                                   int out_rows, int out_cols) {
    check_grid(grid, rows, cols);
    if (scale < 1) throw InputError("upsample_window: scale must be >= 1");
    const double ratio = 1.0 / scale;
    std::vector<Tap> xs(out_cols);
    for (int j = 0; j < out_cols; ++j) xs[j] = tap_for(col0 + j, ratio, cols);
    std::vector<float> out(static_cast<std::size_t>(out_rows) * out_cols);
    for (int i = 0; i < out_rows; ++i) {
        const Tap ty = tap_for(row0 + i, ratio, rows);
        for (int j = 0; j < out_cols; ++j) out[static_cast<std::size_t>(i) * out_cols + j] = sample(grid, cols, ty, xs[j]);
    }
    return out;
}

namespace {

void write_png_impl(const std::filesystem::path& path, int width, int height, int color_type,
                    const std::uint8_t* data, int channels) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.c_str(), "wb"), &std::fclose);
    if (!fp) throw InputError("cannot write image: " + path.string());
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw Error("libpng initialisation failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error("libpng failed writing " + path.string());
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int r = 0; r < height; ++r)
        png_write_row(png, const_cast<png_bytep>(data + static_cast<std::size_t>(r) * width * channels));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace

void write_png(const std::filesystem::path& path, const RgbImage& image) {
    write_png_impl(path, image.width, image.height, PNG_COLOR_TYPE_RGB, image.pixels.data(), 3);
}

void write_png_gray(const std::filesystem::path& path, int width, int height, std::span<const std::uint8_t> gray) {
    if (gray.size() != static_cast<std::size_t>(width) * height) throw InputError("gray image size mismatch");
    write_png_impl(path, width, height, PNG_COLOR_TYPE_GRAY, gray.data(), 1);
}

}  // namespace ppnet
