#pragma once

#include <span>

#include "ppnet/core/tensor.hpp"

namespace ppnet {

/// Mean over the batch of -log softmax(logits)[label], evaluated with the
/// row maximum subtracted. When `grad` is given it receives dL/dlogits,
/// (softmax - onehot) / N.
template <typename T>
double cross_entropy(const Tensor<T>& logits, std::span<const int> labels, Tensor<T>* grad = nullptr);

}  // namespace ppnet
