#include "ppnet/model/checkpoint.hpp"

#include "ppnet/core/error.hpp"
#include "ppnet/core/io.hpp"

namespace ppnet {

namespace {
constexpr std::string_view kMagic = "PLNTCKPT";
}

std::string encode_checkpoint(const ModelParams& params) {
    validate_params(params);
    nlohmann::json table = nlohmann::json::array();
    std::size_t offset = 0;
    for (const auto& t : params.tensors) {
        table.push_back({{"name", t.name}, {"shape", t.value.shape()}, {"offset", offset}, {"buffer", t.buffer}});
        offset += t.value.size() * sizeof(float);
    }
    const nlohmann::json header{{"format_version", 1},
                                {"spec", params.spec.to_json()},
                                {"spec_hash", io::hex64(params.spec_hash)},
                                {"init_seed", params.init_seed},
                                {"metadata", params.metadata},
                                {"tensors", table}};
    const std::string text = header.dump();
    std::string out(kMagic);
    io::append_le<std::uint64_t>(out, text.size());
    out += text;
    out.reserve(out.size() + offset);
    for (const auto& t : params.tensors)
        for (float v : t.value.values()) io::append_le(out, v);
    return out;
}

ModelParams decode_checkpoint(std::string_view bytes, const std::string& what) {
    if (bytes.size() < 16 || bytes.substr(0, 8) != kMagic) throw InputError(what + ": not a checkpoint file");
    const auto header_len = io::read_le<std::uint64_t>(bytes, 8);
    if (header_len > bytes.size() - 16) throw InputError(what + ": truncated header");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(bytes.substr(16, header_len));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(what + ": corrupt header: " + e.what());
    }
    const std::string_view data = bytes.substr(16 + header_len);
    ModelParams p;
    try {
        p.spec = ModelSpec::from_json(header.at("spec"));
        const std::string stored = header.at("spec_hash").get<std::string>();
        if (stored != io::hex64(p.spec.hash()))
            throw InputError(what + ": spec hash " + stored + " does not match its spec (" + io::hex64(p.spec.hash()) + ")");
        p.spec_hash = p.spec.hash();
        p.init_seed = header.at("init_seed").get<std::uint64_t>();
        p.metadata = header.value("metadata", nlohmann::json::object());
        for (const auto& entry : header.at("tensors")) {
            NamedTensor<float> t;
            t.name = entry.at("name").get<std::string>();
            t.buffer = entry.value("buffer", false);
            const Shape shape = entry.at("shape").get<Shape>();
            const auto offset = entry.at("offset").get<std::size_t>();
            const std::size_t count = shape_size(shape);
            if (offset + count * sizeof(float) > data.size()) throw InputError(what + ": tensor " + t.name + " is truncated");
            std::vector<float> values(count);
            for (std::size_t i = 0; i < count; ++i) values[i] = io::read_le<float>(data, offset + i * sizeof(float));
            t.value = Tensor<float>(shape, std::move(values));
            p.tensors.push_back(std::move(t));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(what + ": malformed header: " + e.what());
    }
    try {
        validate_params(p);
    } catch (const InputError& e) {
        throw InputError(what + ": " + e.what());
    }
    return p;
}

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params) {
    io::write_file_atomic(path, encode_checkpoint(params));
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
    return decode_checkpoint(io::read_file(path), path.string());
}

}  // namespace ppnet
