#include "qmine/harvester/cache.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qmine/common/errors.hpp"

namespace qmine::harvester {

namespace fs = std::filesystem;

namespace {

bool plain_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '.';
}

// Injective mapping to a safe file name: plain characters pass through,
// '-' doubles itself, anything else becomes -xx (lowercase hex).
std::string sanitize(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (plain_char(c)) {
            out.push_back(c);
        } else if (c == '-') {
            out += "--";
        } else {
            char buf[4];
            std::snprintf(buf, sizeof(buf), "-%02x", static_cast<unsigned char>(c));
            out += buf;
        }
    }
    return out;
}

}  // namespace

FileCache::FileCache(std::string dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
}

std::string FileCache::path_for(const std::string& kind, const std::string& id) const {
    return (fs::path(dir_) / (sanitize(kind) + "_" + sanitize(id))).string();
}

bool FileCache::has(const std::string& kind, const std::string& id) const {
    return fs::exists(path_for(kind, id));
}

std::optional<std::string> FileCache::get(const std::string& kind, const std::string& id) const {
    std::lock_guard<std::mutex> lock(mutex_);
    std::ifstream in(path_for(kind, id), std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void FileCache::put(const std::string& kind, const std::string& id, const std::string& payload) {
    std::lock_guard<std::mutex> lock(mutex_);
    std::string path = path_for(kind, id);
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw io_error("cannot write cache file " + tmp);
        out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
        if (!out) throw io_error("short write to " + tmp);
    }
    fs::rename(tmp, path);
}

}  // namespace qmine::harvester
