#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qmine::cli {

struct RunManifest {
    std::string command;
    std::string config_hash;
    std::string tool_version;
    // label -> sha256 of the input file, sorted by label
    std::vector<std::pair<std::string, std::string>> input_hashes;
    std::string identity_hash;  // hash over everything above; excludes timestamps
    std::string created_at;     // ISO 8601 UTC
};

std::string hash_file(const std::string& path);

// Writes <dir>/manifest.json, hashing each (label, path) input. Inputs must exist.
RunManifest write_manifest(const std::string& dir, const std::string& command,
                           const std::string& config_hash,
                           const std::vector<std::pair<std::string, std::string>>& inputs);

RunManifest read_manifest(const std::string& dir);

}  // namespace qmine::cli
