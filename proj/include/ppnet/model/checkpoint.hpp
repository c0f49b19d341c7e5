#pragma once

#include <filesystem>

#include "ppnet/model/params.hpp"

namespace ppnet {

/// Checkpoint file: 8-byte magic "PLNTCKPT", uint64 header length, a JSON
/// header (spec, spec_hash, init_seed, metadata and the tensor table with
/// names, shapes and byte offsets), then little-endian float32 tensor data.
std::string encode_checkpoint(const ModelParams& params);
ModelParams decode_checkpoint(std::string_view bytes, const std::string& what = "checkpoint");

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params);
/// Validates the spec hash and every tensor shape.
ModelParams load_checkpoint(const std::filesystem::path& path);

}  // namespace ppnet
