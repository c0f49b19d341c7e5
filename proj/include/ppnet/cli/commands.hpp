#pragma once

#include <string>
#include <vector>

namespace ppnet::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,   // unexpected internal failure
    kExitInput = 2,     // usage or input error
    kExitProvider = 3,  // raster provider / network failure
    kExitNumerical = 4, // non-finite loss
};

/// Environment variable naming the HTTP raster catalogue used by `ingest`
/// when neither --rasters nor --endpoint is given.
inline constexpr const char* kEndpointEnv = "PPNET_PROVIDER_ENDPOINT";

/// Parses and runs one invocation (argv[0] is the program name).
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace ppnet::cli
