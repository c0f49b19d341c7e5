#include "ppnet/model/params.hpp"

#include <cmath>
#include <random>

#include "ppnet/core/error.hpp"
#include "ppnet/core/random.hpp"

namespace ppnet {

namespace {

void add_conv(std::vector<NamedTensor<float>>& out, const std::string& name, int oc, int ic, int k) {
    out.push_back({name + ".weight", Tensor<float>({oc, ic, k, k}), false});
}

void add_bn(std::vector<NamedTensor<float>>& out, const std::string& name, int c) {
    out.push_back({name + ".weight", Tensor<float>({c}), false});
    out.push_back({name + ".bias", Tensor<float>({c}), false});
    out.push_back({name + ".running_mean", Tensor<float>({c}), true});
    out.push_back({name + ".running_var", Tensor<float>({c}), true});
}

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

template <typename T>
std::size_t BasicModelParams<T>::index(const std::string& name) const {
    for (std::size_t i = 0; i < tensors.size(); ++i)
        if (tensors[i].name == name) return i;
    throw InputError("model has no tensor named '" + name + "'");
}

template <typename T>
bool BasicModelParams<T>::contains(const std::string& name) const {
    for (const auto& t : tensors)
        if (t.name == name) return true;
    return false;
}

template <typename T>
std::size_t BasicModelParams<T>::parameter_count() const {
    std::size_t n = 0;
    for (const auto& t : tensors)
        if (!t.buffer) n += t.value.size();
    return n;
}

template struct BasicModelParams<float>;
template struct BasicModelParams<double>;

std::vector<NamedTensor<float>> parameter_layout(const ModelSpec& spec) {
    spec.validate();
    std::vector<NamedTensor<float>> out;
    add_conv(out, "conv1", spec.stem_channels, spec.in_channels, spec.stem_kernel);
    add_bn(out, "bn1", spec.stem_channels);
    int in = spec.stem_channels;
    for (std::size_t s = 0; s < spec.stages.size(); ++s) {
        const auto& st = spec.stages[s];
        const int mid = st.width / spec.bottleneck_factor;
        for (int b = 0; b < st.blocks; ++b) {
            const std::string p = "layer" + std::to_string(s + 1) + "." + std::to_string(b);
            const int stride = b == 0 ? st.stride : 1;
            add_conv(out, p + ".conv1", mid, in, 1);
            add_bn(out, p + ".bn1", mid);
            add_conv(out, p + ".conv2", mid, mid, 3);
            add_bn(out, p + ".bn2", mid);
            add_conv(out, p + ".conv3", st.width, mid, 1);
            add_bn(out, p + ".bn3", st.width);
            if (stride != 1 || in != st.width) {
                add_conv(out, p + ".downsample.0", st.width, in, 1);
                add_bn(out, p + ".downsample.1", st.width);
            }
            in = st.width;
        }
    }
    out.push_back({"fc.weight", Tensor<float>({spec.num_classes, in}), false});
    out.push_back({"fc.bias", Tensor<float>({spec.num_classes}), false});
    return out;
}

bool is_head_tensor(const std::string& name) { return name == "fc.weight" || name == "fc.bias"; }

namespace {

void init_tensor(NamedTensor<float>& t, std::uint64_t init_seed) {
    Rng rng(mix_seed(init_seed, fnv1a64(t.name)));
    const auto& shape = t.value.shape();
    if (t.name == "fc.weight") {
        const double bound = 1.0 / std::sqrt(static_cast<double>(shape[1]));
        std::uniform_real_distribution<double> u(-bound, bound);
        for (float& v : t.value.values()) v = static_cast<float>(u(rng));
    } else if (t.name == "fc.bias") {
        t.value.fill(0.0f);
    } else if (shape.size() == 4) {
        const double fan_in = static_cast<double>(shape[1]) * shape[2] * shape[3];
        std::normal_distribution<double> n(0.0, std::sqrt(2.0 / fan_in));
        for (float& v : t.value.values()) v = static_cast<float>(n(rng));
    } else if (ends_with(t.name, ".running_var")) {
        t.value.fill(1.0f);
    } else if (ends_with(t.name, ".running_mean") || ends_with(t.name, ".bias")) {
        t.value.fill(0.0f);
    } else if (ends_with(t.name, ".bn3.weight")) {
        t.value.fill(0.0f);
    } else {
        t.value.fill(1.0f);
    }
}

}  // namespace

ModelParams build_model(const ModelSpec& spec, std::uint64_t init_seed) {
    ModelParams p;
    p.spec = spec;
    p.spec_hash = spec.hash();
    p.init_seed = init_seed;
    p.tensors = parameter_layout(spec);
    for (auto& t : p.tensors) init_tensor(t, init_seed);
    return p;
}

void copy_backbone(const ModelParams& source, ModelParams& target) {
    ModelSpec a = source.spec, b = target.spec;
    a.num_classes = b.num_classes = 0;
    if (a != b)
        throw InputError("incompatible backbones: source spec " + source.spec.to_json().dump() + " vs target " +
                         target.spec.to_json().dump());
    for (auto& t : target.tensors) {
        if (is_head_tensor(t.name)) continue;
        const Tensor<float>& src = source.get(t.name);
        if (src.shape() != t.value.shape())
            throw InputError("incompatible tensor " + t.name + ": " + shape_string(src.shape()) + " vs " +
                             shape_string(t.value.shape()));
        t.value = src;
    }
}

ModelParams transfer_head(const ModelParams& source, int new_num_classes, std::uint64_t seed) {
    validate_params(source);
    ModelSpec spec = source.spec;
    spec.num_classes = new_num_classes;
    ModelParams target = build_model(spec, seed);
    copy_backbone(source, target);
    target.metadata = nlohmann::json::object();
    target.metadata["transferred_from"] = {{"spec_hash", source.spec_hash}, {"num_classes", source.spec.num_classes}};
    return target;
}

template <typename T>
void validate_params(const BasicModelParams<T>& params) {
    if (params.spec_hash != params.spec.hash())
        throw InputError("spec hash mismatch: stored " + std::to_string(params.spec_hash) + ", spec hashes to " +
                         std::to_string(params.spec.hash()));
    const auto layout = parameter_layout(params.spec);
    if (layout.size() != params.tensors.size())
        throw InputError("model has " + std::to_string(params.tensors.size()) + " tensors, spec requires " +
                         std::to_string(layout.size()));
    for (std::size_t i = 0; i < layout.size(); ++i) {
        const auto& have = params.tensors[i];
        if (have.name != layout[i].name) throw InputError("unexpected tensor '" + have.name + "', expected '" + layout[i].name + "'");
        if (have.value.shape() != layout[i].value.shape())
            throw InputError("tensor " + have.name + " has shape " + shape_string(have.value.shape()) + ", spec requires " +
                             shape_string(layout[i].value.shape()));
    }
}

template void validate_params(const BasicModelParams<float>&);
template void validate_params(const BasicModelParams<double>&);

}  // namespace ppnet
