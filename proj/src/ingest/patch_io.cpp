#include "ppnet/ingest/patch_io.hpp"

#include <cstring>

#include "ppnet/core/io.hpp"
#include "ppnet/core/random.hpp"

namespace ppnet {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[8] = {'P', 'L', 'N', 'T', 'P', 'A', 'T', 'C'};
constexpr std::size_t kHeader = 20;

bool same_content(const fs::path& path, std::string_view bytes) {
    if (!fs::exists(path) || fs::file_size(path) != bytes.size()) return false;
    return fnv1a64(io::read_file(path)) == fnv1a64(bytes);
}

}  // namespace

std::string encode_patch_container(const Tensor<float>& pixels) {
    if (pixels.rank() != 3) throw InputError("patch container needs a channel x row x column tensor");
    std::string out(kMagic, sizeof(kMagic));
    for (int d = 0; d < 3; ++d) io::append_le<std::uint32_t>(out, static_cast<std::uint32_t>(pixels.dim(d)));
    out.reserve(kHeader + pixels.size() * 4);
    for (float v : pixels.values()) io::append_le<float>(out, v);
    return out;
}

Tensor<float> decode_patch_container(std::string_view bytes, const std::string& what) {
    if (bytes.size() < kHeader || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
        throw InputError("not a patch container: " + what);
    Shape shape(3);
    for (int d = 0; d < 3; ++d) shape[d] = static_cast<int>(io::read_le<std::uint32_t>(bytes, 8 + 4 * d));
    const std::size_t count = shape_size(shape);
    if (bytes.size() != kHeader + count * 4) throw InputError("truncated patch container: " + what);
    std::vector<float> values(count);
    for (std::size_t i = 0; i < count; ++i) values[i] = io::read_le<float>(bytes, kHeader + 4 * i);
    return Tensor<float>(std::move(shape), std::move(values));
}

nlohmann::json patch_sidecar(const Patch& patch) {
    nlohmann::json j;
    j["site_id"] = patch.site_id;
    j["label"] = patch.label;
    j["cooling_label"] = patch.cooling_label ? nlohmann::json(*patch.cooling_label) : nlohmann::json(nullptr);
    j["raster_id"] = patch.raster_id;
    j["date"] = format_date(patch.acquisition_date);
    j["center"] = {patch.center.lat, patch.center.lon};
    j["pixel_size"] = patch.pixel_size;
    return j;
}

bool write_patch(const fs::path& dir, const std::string& name, const Patch& patch) {
    validate_patch(patch);
    const std::string data = encode_patch_container(patch.pixels);
    const std::string meta = patch_sidecar(patch).dump(2) + "\n";
    const fs::path data_path = dir / (name + ".patch");
    const fs::path meta_path = dir / (name + ".json");
    if (same_content(data_path, data) && same_content(meta_path, meta)) return false;
    io::write_file_atomic(data_path, data);
    io::write_file_atomic(meta_path, meta);
    return true;
}

Patch read_patch(const fs::path& patch_path) {
    Patch p;
    p.pixels = decode_patch_container(io::read_file(patch_path), patch_path.string());
    fs::path meta_path = patch_path;
    meta_path.replace_extension(".json");
    const auto j = io::read_json(meta_path);
    try {
        p.site_id = j.at("site_id").get<std::string>();
        p.label = j.at("label").get<int>();
        if (j.contains("cooling_label") && !j["cooling_label"].is_null()) p.cooling_label = j["cooling_label"].get<int>();
        p.raster_id = j.value("raster_id", "");
        if (j.contains("date")) p.acquisition_date = parse_date(j["date"].get<std::string>());
        if (j.contains("center")) p.center = {j["center"].at(0).get<double>(), j["center"].at(1).get<double>()};
        p.pixel_size = j.value("pixel_size", kPixelSize);
    } catch (const nlohmann::json::exception& e) {
        throw InputError("invalid patch sidecar " + meta_path.string() + ": " + e.what());
    }
    return p;
}

}  // namespace ppnet
