#include "manifest.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pipeline_config.hpp"
#include "qmine/common/errors.hpp"
#include "qmine/common/jsonl.hpp"
#include "qmine/common/sha256.hpp"

namespace qmine::cli {

using jsonl::json;

std::string hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot read input for hashing: " + path);
    Sha256 h;
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
        h.update(std::string_view(buf, static_cast<size_t>(in.gcount())));
    return h.hex_digest();
}

namespace {

std::string identity_digest(const RunManifest& m) {
    Sha256 h;
    h.update(m.command);
    h.update("\n");
    h.update(m.config_hash);
    h.update("\n");
    h.update(m.tool_version);
    h.update("\n");
    for (const auto& [label, digest] : m.input_hashes) {
        h.update(label);
        h.update(":");
        h.update(digest);
        h.update("\n");
    }
    return h.hex_digest();
}

std::string utc_now_iso8601() {
    using namespace std::chrono;
    std::time_t t = system_clock::to_time_t(system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

RunManifest write_manifest(const std::string& dir, const std::string& command,
                           const std::string& config_hash,
                           const std::vector<std::pair<std::string, std::string>>& inputs) {
    RunManifest m;
    m.command = command;
    m.config_hash = config_hash;
    m.tool_version = kToolVersion;
    for (const auto& [label, path] : inputs) m.input_hashes.emplace_back(label, hash_file(path));
    std::sort(m.input_hashes.begin(), m.input_hashes.end());
    m.identity_hash = identity_digest(m);
    m.created_at = utc_now_iso8601();

    json inputs_json = json::object();
    for (const auto& [label, digest] : m.input_hashes) inputs_json[label] = digest;
    json root{{"command", m.command},
              {"config_hash", m.config_hash},
              {"tool_version", m.tool_version},
              {"input_hashes", inputs_json},
              {"identity_hash", m.identity_hash},
              {"created_at", m.created_at}};

    std::filesystem::create_directories(dir);
    const std::string path = dir + "/manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write manifest: " + path);
    out << root.dump(2) << "\n";
    if (!out) throw io_error("write failed: " + path);
    return m;
}

RunManifest read_manifest(const std::string& dir) {
    const std::string path = dir + "/manifest.json";
    std::ifstream in(path, std::ios::binary);
    if (!in) throw not_found_error("no manifest at " + path);
    json root;
    try {
        in >> root;
    } catch (const json::exception& e) {
        throw io_error("corrupt manifest " + path + ": " + e.what());
    }
    RunManifest m;
    try {
        m.command = root.at("command").get<std::string>();
        m.config_hash = root.at("config_hash").get<std::string>();
        m.tool_version = root.at("tool_version").get<std::string>();
        for (const auto& [label, digest] : root.at("input_hashes").items())
            m.input_hashes.emplace_back(label, digest.get<std::string>());
        m.identity_hash = root.at("identity_hash").get<std::string>();
        m.created_at = root.at("created_at").get<std::string>();
    } catch (const json::exception& e) {
        throw io_error("corrupt manifest " + path + ": " + e.what());
    }
    std::sort(m.input_hashes.begin(), m.input_hashes.end());
    return m;
}

}  // namespace qmine::cli
