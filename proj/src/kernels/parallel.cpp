#include <algorithm>
#include <limits>
#include <vector>

#include <omp.h>

#include "ppnet/kernels/kernels.hpp"

namespace ppnet::kernels {

namespace {

constexpr int kColumnBlock = 256;
constexpr int kRowTile = 8;
constexpr int kDepthBlock = 512;

template <typename T>
void im2col(const ConvGeometry& g, const T* x, T* col) {
    const int oh = g.out_h(), ow = g.out_w(), k = g.kernel;
    const std::size_t plane = static_cast<std::size_t>(oh) * ow;
    for (int c = 0; c < g.in_channels; ++c) {
        const T* xc = x + static_cast<std::size_t>(c) * g.in_h * g.in_w;
        for (int ky = 0; ky < k; ++ky) {
            for (int kx = 0; kx < k; ++kx) {
                T* row = col + ((static_cast<std::size_t>(c) * k + ky) * k + kx) * plane;
                for (int oy = 0; oy < oh; ++oy) {
                    const int iy = oy * g.stride - g.pad + ky;
                    T* out = row + static_cast<std::size_t>(oy) * ow;
                    if (iy < 0 || iy >= g.in_h) {
                        std::fill(out, out + ow, T{0});
                        continue;
                    }
                    const T* xrow = xc + static_cast<std::size_t>(iy) * g.in_w;
                    for (int ox = 0; ox < ow; ++ox) {
                        const int ix = ox * g.stride - g.pad + kx;
                        out[ox] = (ix >= 0 && ix < g.in_w) ? xrow[ix] : T{0};
                    }
                }
            }
        }
    }
}

template <typename T>
void col2im(const ConvGeometry& g, const T* col, T* dx) {
    const int oh = g.out_h(), ow = g.out_w(), k = g.kernel;
    const std::size_t plane = static_cast<std::size_t>(oh) * ow;
    std::fill(dx, dx + static_cast<std::size_t>(g.in_channels) * g.in_h * g.in_w, T{0});
    for (int c = 0; c < g.in_channels; ++c) {
        T* dxc = dx + static_cast<std::size_t>(c) * g.in_h * g.in_w;
        for (int ky = 0; ky < k; ++ky) {
            for (int kx = 0; kx < k; ++kx) {
                const T* row = col + ((static_cast<std::size_t>(c) * k + ky) * k + kx) * plane;
                for (int oy = 0; oy < oh; ++oy) {
                    const int iy = oy * g.stride - g.pad + ky;
                    if (iy < 0 || iy >= g.in_h) continue;
                    T* dxrow = dxc + static_cast<std::size_t>(iy) * g.in_w;
                    const T* in = row + static_cast<std::size_t>(oy) * ow;
                    for (int ox = 0; ox < ow; ++ox) {
                        const int ix = ox * g.stride - g.pad + kx;
                        if (ix >= 0 && ix < g.in_w) dxrow[ix] += in[ox];
                    }
                }
            }
        }
    }
}

bool is_pointwise(const ConvGeometry& g) { return g.kernel == 1 && g.stride == 1 && g.pad == 0; }

}  // namespace

template <typename T>
void gemm_nn(int m, int n, int k, const T* a, const T* b, T* c) {
    const int blocks = (n + kColumnBlock - 1) / kColumnBlock;
#pragma omp parallel for schedule(static)
    for (int jb = 0; jb < blocks; ++jb) {
        const int j0 = jb * kColumnBlock;
        const int j1 = std::min(n, j0 + kColumnBlock);
        for (int i0 = 0; i0 < m; i0 += 4) {
            const int rows = std::min(4, m - i0);
            T* c0 = c + static_cast<std::size_t>(i0) * n;
            T* c1 = rows > 1 ? c0 + n : c0;
            T* c2 = rows > 2 ? c0 + 2 * static_cast<std::size_t>(n) : c0;
            T* c3 = rows > 3 ? c0 + 3 * static_cast<std::size_t>(n) : c0;
            for (int r = 0; r < rows; ++r) std::fill(c0 + static_cast<std::size_t>(r) * n + j0, c0 + static_cast<std::size_t>(r) * n + j1, T{0});
            if (rows == 4) {
                for (int p = 0; p < k; ++p) {
                    const T a0 = a[static_cast<std::size_t>(i0) * k + p];
                    const T a1 = a[static_cast<std::size_t>(i0 + 1) * k + p];
                    const T a2 = a[static_cast<std::size_t>(i0 + 2) * k + p];
                    const T a3 = a[static_cast<std::size_t>(i0 + 3) * k + p];
                    const T* brow = b + static_cast<std::size_t>(p) * n;
#pragma omp simd
                    for (int j = j0; j < j1; ++j) {
                        const T bv = brow[j];
                        c0[j] += a0 * bv;
                        c1[j] += a1 * bv;
                        c2[j] += a2 * bv;
                        c3[j] += a3 * bv;
                    }
                }
            } else {
                for (int r = 0; r < rows; ++r) {
                    T* crow = c0 + static_cast<std::size_t>(r) * n;
                    for (int p = 0; p < k; ++p) {
                        const T av = a[static_cast<std::size_t>(i0 + r) * k + p];
                        const T* brow = b + static_cast<std::size_t>(p) * n;
#pragma omp simd
                        for (int j = j0; j < j1; ++j) crow[j] += av * brow[j];
                    }
                }
            }
        }
    }
}

template <typename T>
void gemm_nt(int m, int n, int k, const T* a, const T* b, T* c) {
    // Row tiles times k-blocks, so a block of B is reused by every row of the
    // tile while it is still in cache.
    const int tiles = (m + kRowTile - 1) / kRowTile;
#pragma omp parallel for schedule(static)
    for (int t = 0; t < tiles; ++t) {
        const int i0 = t * kRowTile;
        const int i1 = std::min(m, i0 + kRowTile);
        for (int i = i0; i < i1; ++i) std::fill(c + static_cast<std::size_t>(i) * n, c + static_cast<std::size_t>(i + 1) * n, T{0});
        for (int p0 = 0; p0 < k; p0 += kDepthBlock) {
            const int p1 = std::min(k, p0 + kDepthBlock);
            for (int j = 0; j < n; ++j) {
                const T* brow = b + static_cast<std::size_t>(j) * k;
                for (int i = i0; i < i1; ++i) {
                    const T* arow = a + static_cast<std::size_t>(i) * k;
                    T sum{0};
#pragma omp simd reduction(+ : sum)
                    for (int p = p0; p < p1; ++p) sum += arow[p] * brow[p];
                    c[static_cast<std::size_t>(i) * n + j] += sum;
                }
            }
        }
    }
}

template <typename T>
void gemm_tn(int m, int n, int k, const T* a, const T* b, T* c) {
    const int blocks = (n + kColumnBlock - 1) / kColumnBlock;
#pragma omp parallel for schedule(static)
    for (int jb = 0; jb < blocks; ++jb) {
        const int j0 = jb * kColumnBlock;
        const int j1 = std::min(n, j0 + kColumnBlock);
        for (int i0 = 0; i0 < m; i0 += 4) {
            const int rows = std::min(4, m - i0);
            T* c0 = c + static_cast<std::size_t>(i0) * n;
            T* c1 = rows > 1 ? c0 + n : c0;
            T* c2 = rows > 2 ? c0 + 2 * static_cast<std::size_t>(n) : c0;
            T* c3 = rows > 3 ? c0 + 3 * static_cast<std::size_t>(n) : c0;
            for (int r = 0; r < rows; ++r) std::fill(c0 + static_cast<std::size_t>(r) * n + j0, c0 + static_cast<std::size_t>(r) * n + j1, T{0});
            if (rows == 4) {
                for (int p = 0; p < k; ++p) {
                    const T* arow = a + static_cast<std::size_t>(p) * m + i0;
                    const T a0 = arow[0], a1 = arow[1], a2 = arow[2], a3 = arow[3];
                    const T* brow = b + static_cast<std::size_t>(p) * n;
#pragma omp simd
                    for (int j = j0; j < j1; ++j) {
                        const T bv = brow[j];
                        c0[j] += a0 * bv;
                        c1[j] += a1 * bv;
                        c2[j] += a2 * bv;
                        c3[j] += a3 * bv;
                    }
                }
            } else {
                for (int r = 0; r < rows; ++r) {
                    T* crow = c0 + static_cast<std::size_t>(r) * n;
                    for (int p = 0; p < k; ++p) {
                        const T av = a[static_cast<std::size_t>(p) * m + i0 + r];
                        const T* brow = b + static_cast<std::size_t>(p) * n;
#pragma omp simd
                        for (int j = j0; j < j1; ++j) crow[j] += av * brow[j];
                    }
                }
            }
        }
    }
}

template <typename T>
void conv2d_forward(const ConvGeometry& g, const T* x, const T* w, T* y) {
    const int ohw = g.out_h() * g.out_w();
    const int ckk = g.in_channels * g.kernel * g.kernel;
    const std::size_t in_stride = static_cast<std::size_t>(g.in_channels) * g.in_h * g.in_w;
    const std::size_t out_stride = static_cast<std::size_t>(g.out_channels) * ohw;
#pragma omp parallel if (g.batch > 1)
    {
        std::vector<T> col;
        if (!is_pointwise(g)) col.resize(static_cast<std::size_t>(ckk) * ohw);
#pragma omp for schedule(static)
        for (int n = 0; n < g.batch; ++n) {
            const T* xn = x + n * in_stride;
            const T* src = xn;
            if (!is_pointwise(g)) {
                im2col(g, xn, col.data());
                src = col.data();
            }
            gemm_nn(g.out_channels, ohw, ckk, w, src, y + n * out_stride);
        }
    }
}

template <typename T>
void conv2d_backward_input(const ConvGeometry& g, const T* dy, const T* w, T* dx) {
    const int ohw = g.out_h() * g.out_w();
    const int ckk = g.in_channels * g.kernel * g.kernel;
    const std::size_t in_stride = static_cast<std::size_t>(g.in_channels) * g.in_h * g.in_w;
    const std::size_t out_stride = static_cast<std::size_t>(g.out_channels) * ohw;
#pragma omp parallel if (g.batch > 1)
    {
        std::vector<T> col;
        if (!is_pointwise(g)) col.resize(static_cast<std::size_t>(ckk) * ohw);
#pragma omp for schedule(static)
        for (int n = 0; n < g.batch; ++n) {
            if (is_pointwise(g)) {
                gemm_tn(ckk, ohw, g.out_channels, w, dy + n * out_stride, dx + n * in_stride);
            } else {
                gemm_tn(ckk, ohw, g.out_channels, w, dy + n * out_stride, col.data());
                col2im(g, col.data(), dx + n * in_stride);
            }
        }
    }
}

template <typename T>
void conv2d_backward_weights(const ConvGeometry& g, const T* x, const T* dy, T* dw) {
    const int ohw = g.out_h() * g.out_w();
    const int ckk = g.in_channels * g.kernel * g.kernel;
    const std::size_t wsize = g.weight_size();
    const std::size_t in_stride = static_cast<std::size_t>(g.in_channels) * g.in_h * g.in_w;
    const std::size_t out_stride = static_cast<std::size_t>(g.out_channels) * ohw;
    std::vector<T> partial(wsize * g.batch);
#pragma omp parallel if (g.batch > 1)
    {
        std::vector<T> col;
        if (!is_pointwise(g)) col.resize(static_cast<std::size_t>(ckk) * ohw);
#pragma omp for schedule(static)
        for (int n = 0; n < g.batch; ++n) {
            const T* src = x + n * in_stride;
            if (!is_pointwise(g)) {
                im2col(g, src, col.data());
                src = col.data();
            }
            gemm_nt(g.out_channels, ckk, ohw, dy + n * out_stride, src, partial.data() + n * wsize);
        }
    }
    // Batch reduction in fixed order.
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < wsize; ++i) {
        T sum{0};
        for (int n = 0; n < g.batch; ++n) sum += partial[n * wsize + i];
        dw[i] = sum;
    }
}

template <typename T>
void maxpool2d_forward(const PoolGeometry& g, const T* x, T* y, std::int32_t* argmax) {
    const int oh = g.out_h(), ow = g.out_w();
    const int planes = g.batch * g.channels;
    // Columns whose window lies fully inside the input take the branch-free path.
    const int ox_lo = std::min(ow, (g.pad + g.stride - 1) / g.stride);
    const int ox_hi = std::max(ox_lo, std::min(ow, (g.in_w + g.pad - g.kernel) / g.stride + 1));
#pragma omp parallel for schedule(static)
    for (int pl = 0; pl < planes; ++pl) {
        const T* xp = x + static_cast<std::size_t>(pl) * g.in_h * g.in_w;
        T* yp = y + static_cast<std::size_t>(pl) * oh * ow;
        std::int32_t* ap = argmax + static_cast<std::size_t>(pl) * oh * ow;
        for (int oy = 0; oy < oh; ++oy) {
            const int y0 = std::max(0, oy * g.stride - g.pad);
            const int y1 = std::min(g.in_h, oy * g.stride - g.pad + g.kernel);
            T* yrow = yp + static_cast<std::size_t>(oy) * ow;
            std::int32_t* arow = ap + static_cast<std::size_t>(oy) * ow;
            auto edge = [&](int ox) {
                const int x0 = std::max(0, ox * g.stride - g.pad);
                const int x1 = std::min(g.in_w, ox * g.stride - g.pad + g.kernel);
                std::int32_t best_idx = y0 * g.in_w + x0;
                T best = xp[best_idx];
                for (int iy = y0; iy < y1; ++iy)
                    for (int ix = x0; ix < x1; ++ix)
                        if (xp[iy * g.in_w + ix] > best) {
                            best = xp[iy * g.in_w + ix];
                            best_idx = iy * g.in_w + ix;
                        }
                yrow[ox] = best;
                arow[ox] = best_idx;
            };
            for (int ox = 0; ox < ox_lo; ++ox) edge(ox);
            {
                const T* first = xp + static_cast<std::size_t>(y0) * g.in_w;
#pragma omp simd
                for (int ox = ox_lo; ox < ox_hi; ++ox) {
                    const int ix = ox * g.stride - g.pad;
                    yrow[ox] = first[ix];
                    arow[ox] = y0 * g.in_w + ix;
                }
                for (int iy = y0; iy < y1; ++iy) {
                    const T* row = xp + static_cast<std::size_t>(iy) * g.in_w;
                    for (int kx = (iy == y0 ? 1 : 0); kx < g.kernel; ++kx) {
#pragma omp simd
                        for (int ox = ox_lo; ox < ox_hi; ++ox) {
                            const int ix = ox * g.stride - g.pad + kx;
                            const T v = row[ix];
                            const bool better = v > yrow[ox];
                            yrow[ox] = better ? v : yrow[ox];
                            arow[ox] = better ? iy * g.in_w + ix : arow[ox];
                        }
                    }
                }
            }
            for (int ox = ox_hi; ox < ow; ++ox) edge(ox);
        }
    }
}

template <typename T>
void maxpool2d_backward(const PoolGeometry& g, const T* dy, const std::int32_t* argmax, T* dx) {
    const int ohw = g.out_h() * g.out_w();
    const int planes = g.batch * g.channels;
    const std::size_t in_plane = static_cast<std::size_t>(g.in_h) * g.in_w;
#pragma omp parallel for schedule(static)
    for (int pl = 0; pl < planes; ++pl) {
        T* dxp = dx + pl * in_plane;
        std::fill(dxp, dxp + in_plane, T{0});
        const T* dyp = dy + static_cast<std::size_t>(pl) * ohw;
        const std::int32_t* ap = argmax + static_cast<std::size_t>(pl) * ohw;
        for (int i = 0; i < ohw; ++i) dxp[ap[i]] += dyp[i];
    }
}

#define PPNET_INSTANTIATE(T)                                                                           \
    template void gemm_nn<T>(int, int, int, const T*, const T*, T*);                                   \
    template void gemm_nt<T>(int, int, int, const T*, const T*, T*);                                   \
    template void gemm_tn<T>(int, int, int, const T*, const T*, T*);                                   \
    template void conv2d_forward<T>(const ConvGeometry&, const T*, const T*, T*);                      \
    template void conv2d_backward_input<T>(const ConvGeometry&, const T*, const T*, T*);               \
    template void conv2d_backward_weights<T>(const ConvGeometry&, const T*, const T*, T*);             \
    template void maxpool2d_forward<T>(const PoolGeometry&, const T*, T*, std::int32_t*);              \
    template void maxpool2d_backward<T>(const PoolGeometry&, const T*, const std::int32_t*, T*);

PPNET_INSTANTIATE(float)
PPNET_INSTANTIATE(double)

#undef PPNET_INSTANTIATE

}  // namespace ppnet::kernels
