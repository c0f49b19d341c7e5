#include "ppnet/training/optimizer.hpp"

#include "ppnet/core/error.hpp"

namespace ppnet {

template <typename T>
void sgd_update(std::span<T> w, std::span<T> v, std::span<const T> g, const SgdHyper& h) {
    if (w.size() != v.size() || w.size() != g.size()) throw InputError("sgd_update: size mismatch");
    const T lr = static_cast<T>(h.learning_rate), mu = static_cast<T>(h.momentum), wd = static_cast<T>(h.weight_decay);
    for (std::size_t i = 0; i < w.size(); ++i) {
        v[i] = mu * v[i] + g[i] + wd * w[i];
        w[i] -= lr * v[i];
    }
}

template <typename T>
void sgd_step(BasicModelParams<T>& params, Gradients<T>& velocity, const Gradients<T>& grads, const SgdHyper& h) {
    if (velocity.size() != params.tensors.size() || grads.size() != params.tensors.size())
        throw InputError("sgd_step: gradient list does not mirror the parameters");
    for (std::size_t i = 0; i < params.tensors.size(); ++i) {
        auto& t = params.tensors[i];
        if (t.buffer || grads[i].empty()) continue;
        if (grads[i].shape() != t.value.shape() || velocity[i].shape() != t.value.shape())
            throw InputError("sgd_step: shape mismatch for " + t.name);
        sgd_update<T>(t.value.values(), velocity[i].values(), grads[i].values(), h);
    }
}

template <typename T>
Gradients<T> zero_velocity(const BasicModelParams<T>& params) {
    Gradients<T> v(params.tensors.size());
    for (std::size_t i = 0; i < params.tensors.size(); ++i)
        if (!params.tensors[i].buffer) v[i] = Tensor<T>(params.tensors[i].value.shape());
    return v;
}

template void sgd_update(std::span<float>, std::span<float>, std::span<const float>, const SgdHyper&);
template void sgd_update(std::span<double>, std::span<double>, std::span<const double>, const SgdHyper&);
template void sgd_step(BasicModelParams<float>&, Gradients<float>&, const Gradients<float>&, const SgdHyper&);
template void sgd_step(BasicModelParams<double>&, Gradients<double>&, const Gradients<double>&, const SgdHyper&);
template Gradients<float> zero_velocity(const BasicModelParams<float>&);
template Gradients<double> zero_velocity(const BasicModelParams<double>&);

}  // namespace ppnet
