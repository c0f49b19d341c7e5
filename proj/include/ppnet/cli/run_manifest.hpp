#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ppnet::cli {

inline constexpr std::string_view kToolVersion = "1.0.0";

/// Provenance record written as run_manifest.json into every output
/// directory. Timestamps live only here, so all other artifacts can be
/// compared byte for byte across runs.
struct RunManifest {
    std::string command;
    std::vector<std::string> argv;
    nlohmann::json config = nlohmann::json::object();
    nlohmann::json seeds = nlohmann::json::object();
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::string tool_version{kToolVersion};
    std::chrono::system_clock::time_point started = std::chrono::system_clock::now();
    std::chrono::system_clock::time_point finished{};
    int exit_status = 0;
    std::string error;

    nlohmann::json to_json() const;
    /// Stamps the finish time and writes <dir>/run_manifest.json atomically.
    void write(const std::filesystem::path& dir);
};

std::string iso8601(std::chrono::system_clock::time_point t);

}  // namespace ppnet::cli
