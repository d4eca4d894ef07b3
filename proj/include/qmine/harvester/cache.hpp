#pragma once

#include <mutex>
#include <optional>
#include <string>

namespace qmine::harvester {

// One file per (kind, id) under a directory; payloads stored verbatim and
// never rewritten. Writes go through a temp file + rename.
class FileCache {
public:
    explicit FileCache(std::string dir);

    bool has(const std::string& kind, const std::string& id) const;
    std::optional<std::string> get(const std::string& kind, const std::string& id) const;
    void put(const std::string& kind, const std::string& id, const std::string& payload);

    // Deterministic file name; '-' escapes bytes outside [A-Za-z0-9_.].
    std::string path_for(const std::string& kind, const std::string& id) const;

    const std::string& dir() const { return dir_; }

private:
    std::string dir_;
    mutable std::mutex mutex_;
};

}  // namespace qmine::harvester
