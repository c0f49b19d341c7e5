#include "ppnet/model/network.hpp"

#include <cmath>

#include "ppnet/core/error.hpp"

namespace ppnet {

template <typename T>
Network<T>::Network(BasicModelParams<T>& params) : params_(params) {
    validate_params(params_);
    const ModelSpec& spec = params_.spec;
    stem_conv_ = conv_ref("conv1", spec.stem_stride, spec.stem_pad());
    stem_bn_ = bn_ref("bn1");
    int in = spec.stem_channels;
    for (std::size_t s = 0; s < spec.stages.size(); ++s) {
        const auto& st = spec.stages[s];
        for (int b = 0; b < st.blocks; ++b) {
            const std::string p = "layer" + std::to_string(s + 1) + "." + std::to_string(b);
            const int stride = b == 0 ? st.stride : 1;
            BlockRef r{conv_ref(p + ".conv1", 1, 0), conv_ref(p + ".conv2", stride, 1), conv_ref(p + ".conv3", 1, 0),
                       bn_ref(p + ".bn1"),          bn_ref(p + ".bn2"),               bn_ref(p + ".bn3"),
                       std::nullopt,                std::nullopt};
            if (stride != 1 || in != st.width) {
                r.dconv = conv_ref(p + ".downsample.0", stride, 0);
                r.dbn = bn_ref(p + ".downsample.1");
            }
            blocks_.push_back(r);
            in = st.width;
        }
    }
    fc_w_ = params_.index("fc.weight");
    fc_b_ = params_.index("fc.bias");
}

template <typename T>
typename Network<T>::BnRef Network<T>::bn_ref(const std::string& name) const {
    return {params_.index(name + ".weight"), params_.index(name + ".bias"), params_.index(name + ".running_mean"),
            params_.index(name + ".running_var")};
}

template <typename T>
typename Network<T>::ConvRef Network<T>::conv_ref(const std::string& name, int stride, int pad) const {
    return {params_.index(name + ".weight"), stride, pad};
}

template <typename T>
Tensor<T> Network<T>::conv(const ConvRef& c, const Tensor<T>& x) const {
    return layers::conv_forward(x, params_.tensors[c.weight].value, c.stride, c.pad);
}

template <typename T>
Tensor<T> Network<T>::bn(const BnRef& b, const Tensor<T>& x, Mode mode, layers::BatchNormCache<T>* cache) {
    auto& t = params_.tensors;
    if (mode == Mode::Train)
        return layers::batchnorm_train(x, t[b.gamma].value, t[b.beta].value, t[b.mean].value, t[b.var].value, cache);
    return layers::batchnorm_eval(x, t[b.gamma].value, t[b.beta].value, t[b.mean].value, t[b.var].value);
}

template <typename T>
void Network<T>::check_input(const Tensor<T>& input) const {
    if (input.rank() != 4) throw InputError("network input must be N x C x H x W, got " + shape_string(input.shape()));
    if (input.dim(1) != params_.spec.in_channels)
        throw InputError("network expects " + std::to_string(params_.spec.in_channels) + " input channels, got " +
                         std::to_string(input.dim(1)));
    for (T v : input.values())
        if (!std::isfinite(static_cast<double>(v))) throw InputError("network input contains non-finite values");
}

template <typename T>
Tensor<T> Network<T>::run_stem(const Tensor<T>& input, Mode mode, bool record) {
    check_input(input);
    const ModelSpec& spec = params_.spec;
    Tensor<T> s = conv(stem_conv_, input);
    s = bn(stem_bn_, s, mode, record ? &stem_cache_ : nullptr);
    layers::relu_inplace(s);
    std::vector<std::int32_t> argmax;
    Tensor<T> pooled = layers::maxpool_forward(s, spec.pool_kernel, spec.pool_stride, spec.pool_pad(), argmax);
    if (record) {
        input_ = input;
        stem_shape_ = s.shape();
        stem_out_ = std::move(s);
        pool_argmax_ = std::move(argmax);
    }
    return pooled;
}

template <typename T>
Tensor<T> Network<T>::block_forward(const BlockRef& b, const Tensor<T>& x, Mode mode, BlockCache* cache) {
    Tensor<T> r1 = bn(b.b1, conv(b.c1, x), mode, cache ? &cache->n1 : nullptr);
    layers::relu_inplace(r1);
    Tensor<T> r2 = bn(b.b2, conv(b.c2, r1), mode, cache ? &cache->n2 : nullptr);
    layers::relu_inplace(r2);
    Tensor<T> out = bn(b.b3, conv(b.c3, r2), mode, cache ? &cache->n3 : nullptr);
    if (b.dconv)
        layers::add_inplace(out, bn(*b.dbn, conv(*b.dconv, x), mode, cache ? &cache->nd : nullptr));
    else
        layers::add_inplace(out, x);
    layers::relu_inplace(out);
    if (cache) {
        cache->r1 = std::move(r1);
        cache->r2 = std::move(r2);
    }
    return out;
}

template <typename T>
Tensor<T> Network<T>::run_features(const Tensor<T>& input, Mode mode, bool record) {
    Tensor<T> x = run_stem(input, mode, record);
    if (record) block_caches_.assign(blocks_.size(), BlockCache{});
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        Tensor<T> out = block_forward(blocks_[i], x, mode, record ? &block_caches_[i] : nullptr);
        if (record) block_caches_[i].in = std::move(x);
        x = std::move(out);
    }
    return x;
}

template <typename T>
Tensor<T> Network<T>::stem(const Tensor<T>& input, Mode mode) {
    recorded_ = false;
    return run_stem(input, mode, false);
}

template <typename T>
Tensor<T> Network<T>::features(const Tensor<T>& input, Mode mode) {
    recorded_ = false;
    return run_features(input, mode, false);
}

template <typename T>
Tensor<T> Network<T>::forward(const Tensor<T>& input, Mode mode) {
    const bool record = mode == Mode::Train;
    recorded_ = false;
    Tensor<T> f = run_features(input, mode, record);
    Tensor<T> pooled = layers::global_avg_pool(f);
    Tensor<T> logits = layers::linear_forward(pooled, params_.tensors[fc_w_].value, params_.tensors[fc_b_].value);
    if (record) {
        feat_h_ = f.dim(2);
        feat_w_ = f.dim(3);
        feat_ = std::move(pooled);
        final_out_ = std::move(f);
        recorded_ = true;
    }
    return logits;
}

template <typename T>
Tensor<T> Network<T>::bn_backward(const BnRef& b, const layers::BatchNormCache<T>& cache, const Tensor<T>& dy,
                                  Gradients<T>& grads) const {
    return layers::batchnorm_backward(dy, params_.tensors[b.gamma].value, cache, grads[b.gamma], grads[b.beta]);
}

template <typename T>
void Network<T>::conv_backward(const ConvRef& c, const Tensor<T>& x, const Tensor<T>& dy, Gradients<T>& grads,
                               Tensor<T>* dx) const {
    Tensor<T> g = layers::conv_backward(x, params_.tensors[c.weight].value, dy, c.stride, c.pad, grads[c.weight],
                                        dx != nullptr);
    if (dx) *dx = std::move(g);
}

template <typename T>
Tensor<T> Network<T>::block_backward(const BlockRef& b, BlockCache& cache, const Tensor<T>& out, Tensor<T> dout,
                                     Gradients<T>& grads) {
    layers::relu_backward_inplace(dout, out);
    Tensor<T> din;
    if (b.dconv) {
        Tensor<T> dd = bn_backward(*b.dbn, cache.nd, dout, grads);
        conv_backward(*b.dconv, cache.in, dd, grads, &din);
    } else {
        din = dout;
    }
    Tensor<T> d3 = bn_backward(b.b3, cache.n3, dout, grads);
    Tensor<T> dr2;
    conv_backward(b.c3, cache.r2, d3, grads, &dr2);
    layers::relu_backward_inplace(dr2, cache.r2);
    Tensor<T> d2 = bn_backward(b.b2, cache.n2, dr2, grads);
    Tensor<T> dr1;
    conv_backward(b.c2, cache.r1, d2, grads, &dr1);
    layers::relu_backward_inplace(dr1, cache.r1);
    Tensor<T> d1 = bn_backward(b.b1, cache.n1, dr1, grads);
    Tensor<T> dx;
    conv_backward(b.c1, cache.in, d1, grads, &dx);
    layers::add_inplace(din, dx);
    return din;
}

template <typename T>
Gradients<T> Network<T>::backward(const Tensor<T>& dlogits, bool head_only) {
    if (!recorded_) throw InputError("backward() requires a preceding train-mode forward()");
    Gradients<T> grads(params_.tensors.size());
    Tensor<T> dfeat = layers::linear_backward(dlogits, feat_, params_.tensors[fc_w_].value, grads[fc_w_], grads[fc_b_]);
    if (head_only) return grads;
    Tensor<T> d = layers::global_avg_pool_backward(dfeat, feat_h_, feat_w_);
    for (std::size_t i = blocks_.size(); i-- > 0;) {
        const Tensor<T>& out = i + 1 < blocks_.size() ? block_caches_[i + 1].in : final_out_;
        d = block_backward(blocks_[i], block_caches_[i], out, std::move(d), grads);
    }
    const ModelSpec& spec = params_.spec;
    Tensor<T> ds = layers::maxpool_backward(d, stem_shape_, spec.pool_kernel, spec.pool_stride, spec.pool_pad(), pool_argmax_);
    layers::relu_backward_inplace(ds, stem_out_);
    Tensor<T> dc = bn_backward(stem_bn_, stem_cache_, ds, grads);
    conv_backward(stem_conv_, input_, dc, grads, nullptr);
    return grads;
}

template <typename T>
Tensor<T> predict_logits(const BasicModelParams<T>& params, const Tensor<T>& batch) {
    // Eval mode never writes to the parameters.
    Network<T> net(const_cast<BasicModelParams<T>&>(params));
    return net.forward(batch, Mode::Eval);
}

template <typename T>
FeatureMaps<T> feature_maps(const BasicModelParams<T>& params, const Tensor<T>& input) {
    if (input.rank() != 3) throw InputError("feature_maps expects a C x H x W input");
    Tensor<T> batch = input;
    batch.reshape({1, input.dim(0), input.dim(1), input.dim(2)});
    Network<T> net(const_cast<BasicModelParams<T>&>(params));
    Tensor<T> f = net.features(batch, Mode::Eval);
    f.reshape({f.dim(1), f.dim(2), f.dim(3)});
    return {std::move(f), params.get("fc.weight"), params.get("fc.bias")};
}

template <typename T>
std::vector<int> argmax_rows(const Tensor<T>& logits) {
    const int n = logits.dim(0), k = logits.dim(1);
    std::vector<int> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const T* row = logits.data() + static_cast<std::size_t>(i) * k;
        int best = 0;
        for (int j = 1; j < k; ++j)
            if (row[j] > row[best]) best = j;
        out[static_cast<std::size_t>(i)] = best;
    }
    return out;
}

template <typename T>
Tensor<T> stack_batch(const std::vector<const Tensor<T>*>& images) {
    if (images.empty()) throw InputError("cannot stack an empty batch");
    const Shape& s = images.front()->shape();
    if (s.size() != 3) throw InputError("batch images must be C x H x W");
    Tensor<T> out({static_cast<int>(images.size()), s[0], s[1], s[2]});
    const std::size_t each = shape_size(s);
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (images[i]->shape() != s) throw InputError("batch images differ in shape");
        std::copy(images[i]->data(), images[i]->data() + each, out.data() + i * each);
    }
    return out;
}

template class Network<float>;
template class Network<double>;
template Tensor<float> predict_logits(const BasicModelParams<float>&, const Tensor<float>&);
template Tensor<double> predict_logits(const BasicModelParams<double>&, const Tensor<double>&);
template FeatureMaps<float> feature_maps(const BasicModelParams<float>&, const Tensor<float>&);
template FeatureMaps<double> feature_maps(const BasicModelParams<double>&, const Tensor<double>&);
template std::vector<int> argmax_rows(const Tensor<float>&);
template std::vector<int> argmax_rows(const Tensor<double>&);
template Tensor<float> stack_batch(const std::vector<const Tensor<float>*>&);
template Tensor<double> stack_batch(const std::vector<const Tensor<double>*>&);

}  // namespace ppnet
