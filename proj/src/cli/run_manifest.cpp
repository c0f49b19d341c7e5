#include "ppnet/cli/run_manifest.hpp"

#include <ctime>

#include "ppnet/core/io.hpp"

namespace ppnet::cli {

std::string iso8601(std::chrono::system_clock::time_point t) {
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
    const std::time_t secs = static_cast<std::time_t>(ms / 1000);
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                  tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms % 1000));
    return buf;
}

nlohmann::json RunManifest::to_json() const {
    return {{"command", command}, {"argv", argv},       {"config", config},
            {"seeds", seeds},     {"inputs", inputs},   {"outputs", outputs},
            {"tool_version", tool_version},
            {"started", iso8601(started)},
            {"finished", iso8601(finished)},
            {"exit_status", exit_status},
            {"error", error}};
}

void RunManifest::write(const std::filesystem::path& dir) {
    finished = std::chrono::system_clock::now();
    io::write_json(dir / "run_manifest.json", to_json());
}

}  // namespace ppnet::cli
