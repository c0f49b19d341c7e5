#pragma once

#include <cstdint>
#include <vector>

#include "ppnet/core/tensor.hpp"

// Layer primitives on NCHW tensors. Forward functions return fresh tensors;
// backward functions take the upstream gradient and the cached forward state.

namespace ppnet::layers {

inline constexpr double kBatchNormMomentum = 0.1;
inline constexpr double kBatchNormEpsilon = 1e-5;

template <typename T>
Tensor<T> conv_forward(const Tensor<T>& x, const Tensor<T>& weight, int stride, int pad);
/// Writes the weight gradient to `dweight`; returns the input gradient
/// unless `need_input_grad` is false (then returns an empty tensor).
template <typename T>
Tensor<T> conv_backward(const Tensor<T>& x, const Tensor<T>& weight, const Tensor<T>& dy, int stride, int pad,
                        Tensor<T>& dweight, bool need_input_grad = true);

template <typename T>
struct BatchNormCache {
    Tensor<T> xhat;
    std::vector<T> inv_std;
};

/// Normalises with batch statistics and updates the running estimates
/// (running_var receives the unbiased batch variance).
template <typename T>
Tensor<T> batchnorm_train(const Tensor<T>& x, const Tensor<T>& gamma, const Tensor<T>& beta, Tensor<T>& running_mean,
                          Tensor<T>& running_var, BatchNormCache<T>* cache);
template <typename T>
Tensor<T> batchnorm_eval(const Tensor<T>& x, const Tensor<T>& gamma, const Tensor<T>& beta,
                         const Tensor<T>& running_mean, const Tensor<T>& running_var);
template <typename T>
Tensor<T> batchnorm_backward(const Tensor<T>& dy, const Tensor<T>& gamma, const BatchNormCache<T>& cache,
                             Tensor<T>& dgamma, Tensor<T>& dbeta);

template <typename T>
void relu_inplace(Tensor<T>& x);
/// dy *= (y > 0), where y is the ReLU output.
template <typename T>
void relu_backward_inplace(Tensor<T>& dy, const Tensor<T>& y);

template <typename T>
Tensor<T> maxpool_forward(const Tensor<T>& x, int kernel, int stride, int pad, std::vector<std::int32_t>& argmax);
template <typename T>
Tensor<T> maxpool_backward(const Tensor<T>& dy, const Shape& input_shape, int kernel, int stride, int pad,
                           const std::vector<std::int32_t>& argmax);

/// N x C x H x W -> N x C.
template <typename T>
Tensor<T> global_avg_pool(const Tensor<T>& x);
template <typename T>
Tensor<T> global_avg_pool_backward(const Tensor<T>& dfeat, int h, int w);

/// feat (N x C) * weight^T (K x C) + bias -> N x K.
template <typename T>
Tensor<T> linear_forward(const Tensor<T>& feat, const Tensor<T>& weight, const Tensor<T>& bias);
template <typename T>
Tensor<T> linear_backward(const Tensor<T>& dlogits, const Tensor<T>& feat, const Tensor<T>& weight, Tensor<T>& dweight,
                          Tensor<T>& dbias);

template <typename T>
void add_inplace(Tensor<T>& a, const Tensor<T>& b);

}  // namespace ppnet::layers
