#pragma once

// Compute kernels used by the network. Two implementations share one
// interface: the OpenMP-parallel kernels in ppnet::kernels, used by the
// model, and the direct-loop serial kernels in ppnet::kernels::reference,
// kept as the testing oracle and benchmark baseline.
//
// All parallel kernels assign every output element to exactly one thread and
// accumulate in a fixed order, so results do not depend on the thread count.

#include <cstdint>
#include <vector>

namespace ppnet::kernels {

struct ConvGeometry {
    int batch = 1;
    int in_channels = 1;
    int in_h = 1;
    int in_w = 1;
    int out_channels = 1;
    int kernel = 1;
    int stride = 1;
    int pad = 0;

    int out_h() const { return (in_h + 2 * pad - kernel) / stride + 1; }
    int out_w() const { return (in_w + 2 * pad - kernel) / stride + 1; }
    std::size_t weight_size() const {
        return static_cast<std::size_t>(out_channels) * in_channels * kernel * kernel;
    }
};

struct PoolGeometry {
    int batch = 1;
    int channels = 1;
    int in_h = 1;
    int in_w = 1;
    int kernel = 3;
    int stride = 1;
    int pad = 1;

    int out_h() const { return (in_h + 2 * pad - kernel) / stride + 1; }
    int out_w() const { return (in_w + 2 * pad - kernel) / stride + 1; }
};

// C[M x N] = A[M x K] * B[K x N] (row-major, overwrites C).
template <typename T>
void gemm_nn(int m, int n, int k, const T* a, const T* b, T* c);
// C[M x N] = A[M x K] * B[N x K]^T
template <typename T>
void gemm_nt(int m, int n, int k, const T* a, const T* b, T* c);
// C[M x N] = A[K x M]^T * B[K x N]
template <typename T>
void gemm_tn(int m, int n, int k, const T* a, const T* b, T* c);

// x: N x C x H x W, w: OC x C x k x k, y: N x OC x OH x OW (overwritten).
template <typename T>
void conv2d_forward(const ConvGeometry& g, const T* x, const T* w, T* y);
// dx overwritten.
template <typename T>
void conv2d_backward_input(const ConvGeometry& g, const T* dy, const T* w, T* dx);
// dw overwritten with the gradient summed over the batch.
template <typename T>
void conv2d_backward_weights(const ConvGeometry& g, const T* x, const T* dy, T* dw);

// Max pooling with implicit -inf padding. `argmax` receives, per output, the
// flat index within the input plane of the first maximal element.
template <typename T>
void maxpool2d_forward(const PoolGeometry& g, const T* x, T* y, std::int32_t* argmax);
template <typename T>
void maxpool2d_backward(const PoolGeometry& g, const T* dy, const std::int32_t* argmax, T* dx);

namespace reference {

template <typename T>
void gemm_nn(int m, int n, int k, const T* a, const T* b, T* c);
template <typename T>
void conv2d_forward(const ConvGeometry& g, const T* x, const T* w, T* y);
template <typename T>
void conv2d_backward_input(const ConvGeometry& g, const T* dy, const T* w, T* dx);
template <typename T>
void conv2d_backward_weights(const ConvGeometry& g, const T* x, const T* dy, T* dw);
template <typename T>
void maxpool2d_forward(const PoolGeometry& g, const T* x, T* y, std::int32_t* argmax);

}  // namespace reference

}  // namespace ppnet::kernels
