#include "ppnet/model/layers.hpp"

#include <cmath>

#include "ppnet/core/error.hpp"
#include "ppnet/kernels/kernels.hpp"

namespace ppnet::layers {

namespace {

kernels::ConvGeometry geometry(const Shape& x, const Shape& w, int stride, int pad) {
    if (x.size() != 4 || w.size() != 4) throw InputError("convolution expects 4-D input and weight");
    if (x[1] != w[1])
        throw InputError("convolution channel mismatch: input " + shape_string(x) + ", weight " + shape_string(w));
    kernels::ConvGeometry g;
    g.batch = x[0];
    g.in_channels = x[1];
    g.in_h = x[2];
    g.in_w = x[3];
    g.out_channels = w[0];
    g.kernel = w[2];
    g.stride = stride;
    g.pad = pad;
    return g;
}

}  // namespace

template <typename T>
Tensor<T> conv_forward(const Tensor<T>& x, const Tensor<T>& weight, int stride, int pad) {
    const auto g = geometry(x.shape(), weight.shape(), stride, pad);
    Tensor<T> y({g.batch, g.out_channels, g.out_h(), g.out_w()});
    kernels::conv2d_forward(g, x.data(), weight.data(), y.data());
    return y;
}

template <typename T>
Tensor<T> conv_backward(const Tensor<T>& x, const Tensor<T>& weight, const Tensor<T>& dy, int stride, int pad,
                        Tensor<T>& dweight, bool need_input_grad) {
    const auto g = geometry(x.shape(), weight.shape(), stride, pad);
    dweight = Tensor<T>(weight.shape());
    kernels::conv2d_backward_weights(g, x.data(), dy.data(), dweight.data());
    if (!need_input_grad) return {};
    Tensor<T> dx(x.shape());
    kernels::conv2d_backward_input(g, dy.data(), weight.data(), dx.data());
    return dx;
}

template <typename T>
Tensor<T> batchnorm_train(const Tensor<T>& x, const Tensor<T>& gamma, const Tensor<T>& beta, Tensor<T>& running_mean,
                          Tensor<T>& running_var, BatchNormCache<T>* cache) {
    const int n = x.dim(0), c = x.dim(1);
    const std::size_t plane = static_cast<std::size_t>(x.dim(2)) * x.dim(3);
    const std::size_t m = plane * n;
    Tensor<T> y(x.shape());
    if (cache) {
        cache->xhat = Tensor<T>(x.shape());
        cache->inv_std.assign(static_cast<std::size_t>(c), T{});
    }
#pragma omp parallel for schedule(static)
    for (int ch = 0; ch < c; ++ch) {
        double sum = 0.0, sum_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const T* p = x.data() + (static_cast<std::size_t>(i) * c + ch) * plane;
            double s = 0.0, s2 = 0.0;
#pragma omp simd reduction(+ : s, s2)
            for (std::size_t k = 0; k < plane; ++k) {
                const double v = p[k];
                s += v;
                s2 += v * v;
            }
            sum += s;
            sum_sq += s2;
        }
        const double mean = sum / static_cast<double>(m);
        const double sq = std::max(0.0, sum_sq - sum * mean);
        const double var = sq / static_cast<double>(m);
        const double inv = 1.0 / std::sqrt(var + kBatchNormEpsilon);
        const T tmean = static_cast<T>(mean), tinv = static_cast<T>(inv);
        const T gm = gamma[ch], bt = beta[ch];
        for (int i = 0; i < n; ++i) {
            const std::size_t off = (static_cast<std::size_t>(i) * c + ch) * plane;
            const T* px = x.data() + off;
            T* py = y.data() + off;
            if (cache) {
                T* ph = cache->xhat.data() + off;
#pragma omp simd
                for (std::size_t k = 0; k < plane; ++k) {
                    const T xh = (px[k] - tmean) * tinv;
                    ph[k] = xh;
                    py[k] = gm * xh + bt;
                }
            } else {
#pragma omp simd
                for (std::size_t k = 0; k < plane; ++k) py[k] = gm * ((px[k] - tmean) * tinv) + bt;
            }
        }
        if (cache) cache->inv_std[ch] = static_cast<T>(inv);
        const double unbiased = m > 1 ? sq / static_cast<double>(m - 1) : var;
        running_mean[ch] = static_cast<T>((1.0 - kBatchNormMomentum) * running_mean[ch] + kBatchNormMomentum * mean);
        running_var[ch] = static_cast<T>((1.0 - kBatchNormMomentum) * running_var[ch] + kBatchNormMomentum * unbiased);
    }
    return y;
}

template <typename T>
Tensor<T> batchnorm_eval(const Tensor<T>& x, const Tensor<T>& gamma, const Tensor<T>& beta,
                         const Tensor<T>& running_mean, const Tensor<T>& running_var) {
    const int n = x.dim(0), c = x.dim(1);
    const std::size_t plane = static_cast<std::size_t>(x.dim(2)) * x.dim(3);
    Tensor<T> y(x.shape());
#pragma omp parallel for collapse(2) schedule(static)
    for (int i = 0; i < n; ++i)
        for (int ch = 0; ch < c; ++ch) {
            const T scale = static_cast<T>(gamma[ch] / std::sqrt(static_cast<double>(running_var[ch]) + kBatchNormEpsilon));
            const T shift = static_cast<T>(beta[ch] - running_mean[ch] * static_cast<double>(scale));
            const std::size_t off = (static_cast<std::size_t>(i) * c + ch) * plane;
            for (std::size_t k = 0; k < plane; ++k) y[off + k] = x[off + k] * scale + shift;
        }
    return y;
}

template <typename T>
Tensor<T> batchnorm_backward(const Tensor<T>& dy, const Tensor<T>& gamma, const BatchNormCache<T>& cache,
                             Tensor<T>& dgamma, Tensor<T>& dbeta) {
    const int n = dy.dim(0), c = dy.dim(1);
    const std::size_t plane = static_cast<std::size_t>(dy.dim(2)) * dy.dim(3);
    const double m = static_cast<double>(plane) * n;
    Tensor<T> dx(dy.shape());
    dgamma = Tensor<T>({c});
    dbeta = Tensor<T>({c});
#pragma omp parallel for schedule(static)
    for (int ch = 0; ch < c; ++ch) {
        double sum_dy = 0.0, sum_dy_xhat = 0.0;
        for (int i = 0; i < n; ++i) {
            const std::size_t off = (static_cast<std::size_t>(i) * c + ch) * plane;
            const T* pd = dy.data() + off;
            const T* ph = cache.xhat.data() + off;
            double s1 = 0.0, s2 = 0.0;
#pragma omp simd reduction(+ : s1, s2)
            for (std::size_t k = 0; k < plane; ++k) {
                s1 += pd[k];
                s2 += static_cast<double>(pd[k]) * ph[k];
            }
            sum_dy += s1;
            sum_dy_xhat += s2;
        }
        dgamma[ch] = static_cast<T>(sum_dy_xhat);
        dbeta[ch] = static_cast<T>(sum_dy);
        const T k1 = static_cast<T>(gamma[ch] * static_cast<double>(cache.inv_std[ch]));
        const T mean_dy = static_cast<T>(sum_dy / m), mean_dy_xhat = static_cast<T>(sum_dy_xhat / m);
        for (int i = 0; i < n; ++i) {
            const std::size_t off = (static_cast<std::size_t>(i) * c + ch) * plane;
            const T* pd = dy.data() + off;
            const T* ph = cache.xhat.data() + off;
            T* px = dx.data() + off;
#pragma omp simd
            for (std::size_t k = 0; k < plane; ++k) px[k] = k1 * (pd[k] - mean_dy - ph[k] * mean_dy_xhat);
        }
    }
    return dx;
}

template <typename T>
void relu_inplace(Tensor<T>& x) {
    T* p = x.data();
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for simd schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) p[i] = p[i] > T{} ? p[i] : T{};
}

template <typename T>
void relu_backward_inplace(Tensor<T>& dy, const Tensor<T>& y) {
    T* d = dy.data();
    const T* out = y.data();
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(dy.size());
#pragma omp parallel for simd schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) d[i] = out[i] > T{} ? d[i] : T{};
}

template <typename T>
Tensor<T> maxpool_forward(const Tensor<T>& x, int kernel, int stride, int pad, std::vector<std::int32_t>& argmax) {
    kernels::PoolGeometry g{x.dim(0), x.dim(1), x.dim(2), x.dim(3), kernel, stride, pad};
    Tensor<T> y({g.batch, g.channels, g.out_h(), g.out_w()});
    argmax.assign(y.size(), 0);
    kernels::maxpool2d_forward(g, x.data(), y.data(), argmax.data());
    return y;
}

template <typename T>
Tensor<T> maxpool_backward(const Tensor<T>& dy, const Shape& input_shape, int kernel, int stride, int pad,
                           const std::vector<std::int32_t>& argmax) {
    kernels::PoolGeometry g{input_shape[0], input_shape[1], input_shape[2], input_shape[3], kernel, stride, pad};
    Tensor<T> dx(input_shape);
    kernels::maxpool2d_backward(g, dy.data(), argmax.data(), dx.data());
    return dx;
}

template <typename T>
Tensor<T> global_avg_pool(const Tensor<T>& x) {
    const int n = x.dim(0), c = x.dim(1);
    const std::size_t plane = static_cast<std::size_t>(x.dim(2)) * x.dim(3);
    Tensor<T> out({n, c});
#pragma omp parallel for collapse(2) schedule(static)
    for (int i = 0; i < n; ++i)
        for (int ch = 0; ch < c; ++ch) {
            const T* p = x.data() + (static_cast<std::size_t>(i) * c + ch) * plane;
            double s = 0.0;
            for (std::size_t k = 0; k < plane; ++k) s += p[k];
            out[static_cast<std::size_t>(i) * c + ch] = static_cast<T>(s / static_cast<double>(plane));
        }
    return out;
}

template <typename T>
Tensor<T> global_avg_pool_backward(const Tensor<T>& dfeat, int h, int w) {
    const int n = dfeat.dim(0), c = dfeat.dim(1);
    const std::size_t plane = static_cast<std::size_t>(h) * w;
    Tensor<T> dx({n, c, h, w});
    const T scale = static_cast<T>(1.0 / static_cast<double>(plane));
    for (std::size_t i = 0; i < static_cast<std::size_t>(n) * c; ++i) {
        const T v = dfeat[i] * scale;
        std::fill(dx.data() + i * plane, dx.data() + (i + 1) * plane, v);
    }
    return dx;
}

template <typename T>
Tensor<T> linear_forward(const Tensor<T>& feat, const Tensor<T>& weight, const Tensor<T>& bias) {
    const int n = feat.dim(0), c = feat.dim(1), k = weight.dim(0);
    if (weight.dim(1) != c) throw InputError("head expects " + std::to_string(weight.dim(1)) + " features, got " + std::to_string(c));
    Tensor<T> out({n, k});
    kernels::gemm_nt(n, k, c, feat.data(), weight.data(), out.data());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) out[static_cast<std::size_t>(i) * k + j] += bias[j];
    return out;
}

template <typename T>
Tensor<T> linear_backward(const Tensor<T>& dlogits, const Tensor<T>& feat, const Tensor<T>& weight, Tensor<T>& dweight,
                          Tensor<T>& dbias) {
    const int n = feat.dim(0), c = feat.dim(1), k = weight.dim(0);
    dweight = Tensor<T>(weight.shape());
    dbias = Tensor<T>({k});
    kernels::gemm_tn(k, c, n, dlogits.data(), feat.data(), dweight.data());
    for (int j = 0; j < k; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += dlogits[static_cast<std::size_t>(i) * k + j];
        dbias[j] = static_cast<T>(s);
    }
    Tensor<T> dfeat({n, c});
    kernels::gemm_nn(n, c, k, dlogits.data(), weight.data(), dfeat.data());
    return dfeat;
}

template <typename T>
void add_inplace(Tensor<T>& a, const Tensor<T>& b) {
    if (a.shape() != b.shape()) throw InputError("shape mismatch in residual add: " + shape_string(a.shape()) + " vs " + shape_string(b.shape()));
    T* pa = a.data();
    const T* pb = b.data();
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for simd schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) pa[i] += pb[i];
}

#define PPNET_INSTANTIATE_LAYERS(T)                                                                                  \
    template Tensor<T> conv_forward(const Tensor<T>&, const Tensor<T>&, int, int);                                   \
    template Tensor<T> conv_backward(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, int, int, Tensor<T>&, bool); \
    template Tensor<T> batchnorm_train(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, Tensor<T>&, Tensor<T>&,  \
                                       BatchNormCache<T>*);                                                          \
    template Tensor<T> batchnorm_eval(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, const Tensor<T>&,        \
                                      const Tensor<T>&);                                                             \
    template Tensor<T> batchnorm_backward(const Tensor<T>&, const Tensor<T>&, const BatchNormCache<T>&, Tensor<T>&,  \
                                          Tensor<T>&);                                                               \
    template void relu_inplace(Tensor<T>&);                                                                          \
    template void relu_backward_inplace(Tensor<T>&, const Tensor<T>&);                                               \
    template Tensor<T> maxpool_forward(const Tensor<T>&, int, int, int, std::vector<std::int32_t>&);                 \
    template Tensor<T> maxpool_backward(const Tensor<T>&, const Shape&, int, int, int, const std::vector<std::int32_t>&); \
    template Tensor<T> global_avg_pool(const Tensor<T>&);                                                            \
    template Tensor<T> global_avg_pool_backward(const Tensor<T>&, int, int);                                         \
    template Tensor<T> linear_forward(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);                         \
    template Tensor<T> linear_backward(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, Tensor<T>&, Tensor<T>&); \
    template void add_inplace(Tensor<T>&, const Tensor<T>&);

PPNET_INSTANTIATE_LAYERS(float)
PPNET_INSTANTIATE_LAYERS(double)

}  // namespace ppnet::layers
