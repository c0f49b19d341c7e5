#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ppnet/core/tensor.hpp"
#include "ppnet/model/layers.hpp"
#include "ppnet/model/params.hpp"

namespace ppnet {

enum class Mode { Train, Eval };

/// Executes a bottleneck residual network over a bound parameter set.
///
/// Eval mode uses the running batch-norm statistics and is a pure function
/// of (params, input). Train mode normalises with batch statistics, updates
/// the running estimates in place and records what backward() needs.
template <typename T>
class Network {
public:
    explicit Network(BasicModelParams<T>& params);

    /// input: N x in_channels x H x W -> N x num_classes logits.
    Tensor<T> forward(const Tensor<T>& input, Mode mode);
    /// Final-stage activations (N x C x h x w), before global pooling.
    Tensor<T> features(const Tensor<T>& input, Mode mode);
    /// Activations entering the first residual stage.
    Tensor<T> stem(const Tensor<T>& input, Mode mode);

    /// Gradients of the loss w.r.t. every trainable tensor given dL/dlogits.
    /// Requires the preceding forward() to have run in train mode.
    /// With `head_only`, backbone gradients are left empty.
    Gradients<T> backward(const Tensor<T>& dlogits, bool head_only = false);

    const BasicModelParams<T>& params() const { return params_; }

private:
    struct BnRef {
        std::size_t gamma, beta, mean, var;
    };
    struct ConvRef {
        std::size_t weight;
        int stride, pad;
    };
    struct BlockRef {
        ConvRef c1, c2, c3;
        BnRef b1, b2, b3;
        std::optional<ConvRef> dconv;
        std::optional<BnRef> dbn;
    };
    struct BlockCache {
        Tensor<T> in, r1, r2;
        layers::BatchNormCache<T> n1, n2, n3, nd;
    };

    BnRef bn_ref(const std::string& name) const;
    ConvRef conv_ref(const std::string& name, int stride, int pad) const;
    Tensor<T> conv(const ConvRef& c, const Tensor<T>& x) const;
    Tensor<T> bn(const BnRef& b, const Tensor<T>& x, Mode mode, layers::BatchNormCache<T>* cache);
    Tensor<T> block_forward(const BlockRef& b, const Tensor<T>& x, Mode mode, BlockCache* cache);
    Tensor<T> block_backward(const BlockRef& b, BlockCache& cache, const Tensor<T>& out, Tensor<T> dout,
                             Gradients<T>& grads);
    Tensor<T> run_stem(const Tensor<T>& input, Mode mode, bool record);
    Tensor<T> run_features(const Tensor<T>& input, Mode mode, bool record);
    void check_input(const Tensor<T>& input) const;
    Tensor<T> bn_backward(const BnRef& b, const layers::BatchNormCache<T>& cache, const Tensor<T>& dy,
                          Gradients<T>& grads) const;
    void conv_backward(const ConvRef& c, const Tensor<T>& x, const Tensor<T>& dy, Gradients<T>& grads,
                       Tensor<T>* dx) const;

    BasicModelParams<T>& params_;
    ConvRef stem_conv_{};
    BnRef stem_bn_{};
    std::vector<BlockRef> blocks_;
    std::size_t fc_w_ = 0, fc_b_ = 0;

    // State recorded by a train-mode forward.
    bool recorded_ = false;
    Tensor<T> input_, stem_out_, feat_, final_out_;
    Shape stem_shape_;
    std::vector<std::int32_t> pool_argmax_;
    layers::BatchNormCache<T> stem_cache_;
    std::vector<BlockCache> block_caches_;
    int feat_h_ = 0, feat_w_ = 0;
};

/// Convenience wrappers.
template <typename T>
Tensor<T> predict_logits(const BasicModelParams<T>& params, const Tensor<T>& batch);

/// Final-stage activations of one C x H x W input with the head weights.
template <typename T>
struct FeatureMaps {
    Tensor<T> activations;   // C x h x w
    Tensor<T> head_weight;   // num_classes x C
    Tensor<T> head_bias;     // num_classes
};
template <typename T>
FeatureMaps<T> feature_maps(const BasicModelParams<T>& params, const Tensor<T>& input);

/// Argmax over each logit row; ties resolve to the lowest index.
template <typename T>
std::vector<int> argmax_rows(const Tensor<T>& logits);

/// Stacks C x H x W images into an N x C x H x W batch.
template <typename T>
Tensor<T> stack_batch(const std::vector<const Tensor<T>*>& images);

}  // namespace ppnet
