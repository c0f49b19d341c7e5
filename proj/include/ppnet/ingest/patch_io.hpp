#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "ppnet/ingest/types.hpp"

namespace ppnet {

// Patch container: "PLNTPATC", uint32 channels, uint32 rows, uint32 cols
// (little-endian), then float32 data channel by channel, row-major. The
// metadata lives in a sidecar <name>.json next to <name>.patch.

std::string encode_patch_container(const Tensor<float>& pixels);
Tensor<float> decode_patch_container(std::string_view bytes, const std::string& what = "patch");

nlohmann::json patch_sidecar(const Patch& patch);

/// Writes <dir>/<name>.patch and <dir>/<name>.json. Returns false (and writes
/// nothing) when both files already exist with identical content.
bool write_patch(const std::filesystem::path& dir, const std::string& name, const Patch& patch);

/// Reads a patch from its .patch path (the sidecar is found alongside).
Patch read_patch(const std::filesystem::path& patch_path);

}  // namespace ppnet
