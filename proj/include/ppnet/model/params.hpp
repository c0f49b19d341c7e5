#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppnet/core/tensor.hpp"
#include "ppnet/model/model_spec.hpp"

namespace ppnet {

template <typename T>
struct NamedTensor {
    std::string name;
    Tensor<T> value;
    bool buffer = false;  // batch-norm running statistics; not trained
};

/// Named weights of a network plus provenance. Tensor names follow the
/// usual torchvision layout ("conv1.weight", "layer2.0.bn3.running_var",
/// "fc.bias", ...), in a fixed construction order.
template <typename T>
struct BasicModelParams {
    ModelSpec spec;
    std::uint64_t spec_hash = 0;
    std::uint64_t init_seed = 0;
    std::vector<NamedTensor<T>> tensors;
    nlohmann::json metadata = nlohmann::json::object();

    std::size_t index(const std::string& name) const;
    bool contains(const std::string& name) const;
    Tensor<T>& get(const std::string& name) { return tensors[index(name)].value; }
    const Tensor<T>& get(const std::string& name) const { return tensors[index(name)].value; }
    std::size_t parameter_count() const;

    template <typename U>
    BasicModelParams<U> cast() const {
        BasicModelParams<U> out;
        out.spec = spec;
        out.spec_hash = spec_hash;
        out.init_seed = init_seed;
        out.metadata = metadata;
        out.tensors.reserve(tensors.size());
        for (const auto& t : tensors) out.tensors.push_back({t.name, t.value.template cast<U>(), t.buffer});
        return out;
    }
};

using ModelParams = BasicModelParams<float>;

/// Parameter gradients aligned with BasicModelParams::tensors (buffers stay empty).
template <typename T>
using Gradients = std::vector<Tensor<T>>;

/// Name and shape of every tensor the spec requires, in construction order.
std::vector<NamedTensor<float>> parameter_layout(const ModelSpec& spec);

/// Kaiming (fan-in) normal convolutions; batch-norm scale 1 and shift 0,
/// except a zero scale on the last batch-norm of every bottleneck; head
/// weights uniform in +-1/sqrt(C) with zero bias. Each tensor draws from its
/// own stream seeded by (init_seed, name), so results do not depend on order.
ModelParams build_model(const ModelSpec& spec, std::uint64_t init_seed);

/// Re-initialises the affine head for `new_num_classes`; everything else is
/// copied. Throws when the backbones are incompatible.
ModelParams transfer_head(const ModelParams& source, int new_num_classes, std::uint64_t seed);
/// Copies every backbone tensor of `source` into `target` (shapes checked).
void copy_backbone(const ModelParams& source, ModelParams& target);

/// Throws unless tensor names and shapes match the spec and the stored hash
/// matches the spec.
template <typename T>
void validate_params(const BasicModelParams<T>& params);

bool is_head_tensor(const std::string& name);

}  // namespace ppnet
