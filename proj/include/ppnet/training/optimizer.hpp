#pragma once

#include <span>

#include "ppnet/model/params.hpp"

namespace ppnet {

struct SgdHyper {
    double learning_rate = 0.01;
    double momentum = 0.9;
    double weight_decay = 1e-4;
};

/// Classical momentum with L2 folded into the gradient:
///   v <- momentum * v + g + weight_decay * w
///   w <- w - learning_rate * v
template <typename T>
void sgd_update(std::span<T> w, std::span<T> v, std::span<const T> g, const SgdHyper& h);

/// Applies sgd_update to every trainable tensor that has a gradient. Tensors
/// whose gradient is empty (frozen) are left untouched.
template <typename T>
void sgd_step(BasicModelParams<T>& params, Gradients<T>& velocity, const Gradients<T>& grads, const SgdHyper& h);

/// Zero velocity mirroring the parameters (empty for buffers).
template <typename T>
Gradients<T> zero_velocity(const BasicModelParams<T>& params);

}  // namespace ppnet
