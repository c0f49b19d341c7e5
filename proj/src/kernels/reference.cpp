// Serial direct-loop kernels. Slow on purpose: no im2col, no blocking, double
// accumulators. Only tests and benchmarks call these.

#include <algorithm>
#include <limits>
#include <vector>

#include "ppnet/kernels/kernels.hpp"

namespace ppnet::kernels::reference {

template <typename T>
void gemm_nn(int m, int n, int k, const T* a, const T* b, T* c) {
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            double sum = 0;
            for (int p = 0; p < k; ++p)
                sum += static_cast<double>(a[static_cast<std::size_t>(i) * k + p]) * b[static_cast<std::size_t>(p) * n + j];
            c[static_cast<std::size_t>(i) * n + j] = static_cast<T>(sum);
        }
}

template <typename T>
void conv2d_forward(const ConvGeometry& g, const T* x, const T* w, T* y) {
    const int oh = g.out_h(), ow = g.out_w(), k = g.kernel;
    for (int n = 0; n < g.batch; ++n)
        for (int o = 0; o < g.out_channels; ++o)
            for (int oy = 0; oy < oh; ++oy)
                for (int ox = 0; ox < ow; ++ox) {
                    double sum = 0;
                    for (int c = 0; c < g.in_channels; ++c)
                        for (int ky = 0; ky < k; ++ky)
                            for (int kx = 0; kx < k; ++kx) {
                                const int iy = oy * g.stride - g.pad + ky;
                                const int ix = ox * g.stride - g.pad + kx;
                                if (iy < 0 || iy >= g.in_h || ix < 0 || ix >= g.in_w) continue;
                                sum += static_cast<double>(w[((o * g.in_channels + c) * k + ky) * k + kx]) *
                                       x[((static_cast<std::size_t>(n) * g.in_channels + c) * g.in_h + iy) * g.in_w + ix];
                            }
                    y[((static_cast<std::size_t>(n) * g.out_channels + o) * oh + oy) * ow + ox] = static_cast<T>(sum);
                }
}

template <typename T>
void conv2d_backward_input(const ConvGeometry& g, const T* dy, const T* w, T* dx) {
    const int oh = g.out_h(), ow = g.out_w(), k = g.kernel;
    std::vector<double> acc(static_cast<std::size_t>(g.batch) * g.in_channels * g.in_h * g.in_w, 0.0);
    for (int n = 0; n < g.batch; ++n)
        for (int o = 0; o < g.out_channels; ++o)
            for (int oy = 0; oy < oh; ++oy)
                for (int ox = 0; ox < ow; ++ox) {
                    const double d = dy[((static_cast<std::size_t>(n) * g.out_channels + o) * oh + oy) * ow + ox];
                    for (int c = 0; c < g.in_channels; ++c)
                        for (int ky = 0; ky < k; ++ky)
                            for (int kx = 0; kx < k; ++kx) {
                                const int iy = oy * g.stride - g.pad + ky;
                                const int ix = ox * g.stride - g.pad + kx;
                                if (iy < 0 || iy >= g.in_h || ix < 0 || ix >= g.in_w) continue;
                                acc[((static_cast<std::size_t>(n) * g.in_channels + c) * g.in_h + iy) * g.in_w + ix] +=
                                    d * w[((o * g.in_channels + c) * k + ky) * k + kx];
                            }
                }
    std::transform(acc.begin(), acc.end(), dx, [](double v) { return static_cast<T>(v); });
}

template <typename T>
void conv2d_backward_weights(const ConvGeometry& g, const T* x, const T* dy, T* dw) {
    const int oh = g.out_h(), ow = g.out_w(), k = g.kernel;
    for (int o = 0; o < g.out_channels; ++o)
        for (int c = 0; c < g.in_channels; ++c)
            for (int ky = 0; ky < k; ++ky)
                for (int kx = 0; kx < k; ++kx) {
                    double sum = 0;
                    for (int n = 0; n < g.batch; ++n)
                        for (int oy = 0; oy < oh; ++oy)
                            for (int ox = 0; ox < ow; ++ox) {
                                const int iy = oy * g.stride - g.pad + ky;
                                const int ix = ox * g.stride - g.pad + kx;
                                if (iy < 0 || iy >= g.in_h || ix < 0 || ix >= g.in_w) continue;
                                sum += static_cast<double>(
                                           dy[((static_cast<std::size_t>(n) * g.out_channels + o) * oh + oy) * ow + ox]) *
                                       x[((static_cast<std::size_t>(n) * g.in_channels + c) * g.in_h + iy) * g.in_w + ix];
                            }
                    dw[((o * g.in_channels + c) * k + ky) * k + kx] = static_cast<T>(sum);
                }
}

template <typename T>
void maxpool2d_forward(const PoolGeometry& g, const T* x, T* y, std::int32_t* argmax) {
    const int oh = g.out_h(), ow = g.out_w();
    for (int pl = 0; pl < g.batch * g.channels; ++pl)
        for (int oy = 0; oy < oh; ++oy)
            for (int ox = 0; ox < ow; ++ox) {
                T best = -std::numeric_limits<T>::infinity();
                std::int32_t idx = -1;
                for (int ky = 0; ky < g.kernel; ++ky)
                    for (int kx = 0; kx < g.kernel; ++kx) {
                        const int iy = oy * g.stride - g.pad + ky;
                        const int ix = ox * g.stride - g.pad + kx;
                        if (iy < 0 || iy >= g.in_h || ix < 0 || ix >= g.in_w) continue;
                        const T v = x[(static_cast<std::size_t>(pl) * g.in_h + iy) * g.in_w + ix];
                        if (idx < 0 || v > best) {
                            best = v;
                            idx = iy * g.in_w + ix;
                        }
                    }
                y[(static_cast<std::size_t>(pl) * oh + oy) * ow + ox] = best;
                argmax[(static_cast<std::size_t>(pl) * oh + oy) * ow + ox] = idx;
            }
}

#define PPNET_INSTANTIATE(T)                                                                     \
    template void gemm_nn<T>(int, int, int, const T*, const T*, T*);                             \
    template void conv2d_forward<T>(const ConvGeometry&, const T*, const T*, T*);                \
    template void conv2d_backward_input<T>(const ConvGeometry&, const T*, const T*, T*);         \
    template void conv2d_backward_weights<T>(const ConvGeometry&, const T*, const T*, T*);       \
    template void maxpool2d_forward<T>(const PoolGeometry&, const T*, T*, std::int32_t*);

PPNET_INSTANTIATE(float)
PPNET_INSTANTIATE(double)

#undef PPNET_INSTANTIATE

}  // namespace ppnet::kernels::reference
