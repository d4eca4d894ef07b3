#pragma once

#include <fstream>
#include <functional>
#include <string>

#include <json.hpp>

#include "qmine/common/errors.hpp"

namespace qmine::jsonl {

using json = nlohmann::json;

// Calls fn for each non-empty line. Throws dataset_error on malformed JSON,
// with the 1-based line number in the message.
void for_each_record(const std::string& path, const std::function<void(const json&)>& fn);

class Writer {
public:
    explicit Writer(const std::string& path) : stream_(path, std::ios::binary), path_(path) {
        if (!stream_) throw io_error("cannot open for writing: " + path);
    }

    void write(const json& record) {
        std::string line = record.dump();
        line.push_back('\n');
        stream_.write(line.data(), static_cast<std::streamsize>(line.size()));
        if (!stream_) throw io_error("write failed: " + path_);
    }

    void close() { stream_.close(); }

private:
    std::ofstream stream_;
    std::string path_;
};

}  // namespace qmine::jsonl
