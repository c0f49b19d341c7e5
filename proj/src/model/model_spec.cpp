#include "ppnet/model/model_spec.hpp"

#include <set>

#include "ppnet/core/error.hpp"
#include "ppnet/core/random.hpp"

namespace ppnet {

ModelSpec ModelSpec::resnet50(int num_classes) {
    ModelSpec s;
    s.num_classes = num_classes;
    return s;
}

ModelSpec ModelSpec::resnet50_standard_stem(int num_classes) {
    ModelSpec s = resnet50(num_classes);
    s.stem_kernel = 7;
    s.stem_stride = 2;
    s.pool_stride = 2;
    return s;
}

ModelSpec ModelSpec::tiny(int num_classes) {
    ModelSpec s;
    s.num_classes = num_classes;
    s.stem_channels = 8;
    s.stages = {{1, 32, 1}, {1, 32, 2}, {1, 32, 2}, {1, 32, 2}};
    return s;
}

ModelSpec ModelSpec::small(int num_classes) {
    ModelSpec s;
    s.num_classes = num_classes;
    s.stem_channels = 16;
    s.stages = {{1, 16, 1}, {1, 32, 2}, {1, 64, 2}, {1, 128, 2}};
    return s;
}

ModelSpec ModelSpec::preset(const std::string& name, int num_classes) {
    if (name == "resnet50") return resnet50(num_classes);
    if (name == "tiny") return tiny(num_classes);
    if (name == "small") return small(num_classes);
    throw InputError("unknown model preset '" + name + "' (expected resnet50, tiny or small)");
}

void ModelSpec::validate() const {
    auto positive = [](int v, const char* what) {
        if (v <= 0) throw InputError(std::string("model spec: ") + what + " must be positive");
    };
    positive(in_channels, "in_channels");
    positive(num_classes, "num_classes");
    positive(stem_channels, "stem_channels");
    positive(stem_kernel, "stem_kernel");
    positive(stem_stride, "stem_stride");
    positive(pool_kernel, "pool_kernel");
    positive(pool_stride, "pool_stride");
    positive(bottleneck_factor, "bottleneck_factor");
    if (stem_kernel % 2 == 0 || pool_kernel % 2 == 0) throw InputError("model spec: kernel sizes must be odd");
    if (stages.empty()) throw InputError("model spec: at least one stage required");
    for (std::size_t i = 0; i < stages.size(); ++i) {
        const auto& st = stages[i];
        const std::string where = "model spec: stage " + std::to_string(i + 1);
        if (st.blocks <= 0) throw InputError(where + " needs at least one block");
        if (st.stride != 1 && st.stride != 2) throw InputError(where + " stride must be 1 or 2");
        if (st.width <= 0 || st.width % bottleneck_factor != 0)
            throw InputError(where + " width " + std::to_string(st.width) + " is not divisible by the bottleneck factor " +
                             std::to_string(bottleneck_factor));
    }
}

nlohmann::json ModelSpec::to_json() const {
    nlohmann::json st = nlohmann::json::array();
    for (const auto& s : stages) st.push_back({{"blocks", s.blocks}, {"width", s.width}, {"stride", s.stride}});
    return {{"in_channels", in_channels},     {"num_classes", num_classes}, {"stem_channels", stem_channels},
            {"stem_kernel", stem_kernel},     {"stem_stride", stem_stride}, {"pool_kernel", pool_kernel},
            {"pool_stride", pool_stride},     {"bottleneck_factor", bottleneck_factor}, {"stages", st}};
}

ModelSpec ModelSpec::from_json(const nlohmann::json& j) {
    static const std::set<std::string> known{"in_channels", "num_classes", "stem_channels", "stem_kernel",      "stem_stride",
                                             "pool_kernel", "pool_stride", "bottleneck_factor", "stages"};
    try {
        for (const auto& [key, value] : j.items())
            if (!known.contains(key)) throw InputError("model spec: unknown key '" + key + "'");
        ModelSpec s;
        s.in_channels = j.at("in_channels").get<int>();
        s.num_classes = j.at("num_classes").get<int>();
        s.stem_channels = j.at("stem_channels").get<int>();
        s.stem_kernel = j.at("stem_kernel").get<int>();
        s.stem_stride = j.at("stem_stride").get<int>();
        s.pool_kernel = j.at("pool_kernel").get<int>();
        s.pool_stride = j.at("pool_stride").get<int>();
        s.bottleneck_factor = j.at("bottleneck_factor").get<int>();
        s.stages.clear();
        for (const auto& st : j.at("stages"))
            s.stages.push_back({st.at("blocks").get<int>(), st.at("width").get<int>(), st.at("stride").get<int>()});
        s.validate();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("model spec: ") + e.what());
    }
}

std::uint64_t ModelSpec::hash() const { return fnv1a64(to_json().dump()); }

ShapeTrace infer_shapes(const ModelSpec& spec, int input_size) {
    spec.validate();
    ShapeTrace t;
    t.input = input_size;
    t.stem = conv_out_size(input_size, spec.stem_kernel, spec.stem_stride, spec.stem_pad());
    t.pre_stage = conv_out_size(t.stem, spec.pool_kernel, spec.pool_stride, spec.pool_pad());
    int n = t.pre_stage;
    for (const auto& st : spec.stages) {
        // The first block's 3x3 convolution carries the stride (pad 1).
        n = conv_out_size(n, 3, st.stride, 1);
        t.stage_out.push_back(n);
    }
    t.feature_channels = spec.feature_channels();
    if (t.stem <= 0 || t.pre_stage <= 0 || n <= 0)
        throw InputError("input of " + std::to_string(input_size) + " pixels is too small for the model");
    return t;
}

}  // namespace ppnet
