#include "qmine/common/jsonl.hpp"

namespace qmine::jsonl {

void for_each_record(const std::string& path, const std::function<void(const json&)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open for reading: " + path);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& e) {
            throw dataset_error(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        // Point at the offending record, whatever the callback objects to.
        try {
            fn(record);
        } catch (const dataset_error& e) {
            throw dataset_error(path + ":" + std::to_string(line_no) + ": " + e.what());
        } catch (const input_error& e) {
            throw dataset_error(path + ":" + std::to_string(line_no) + ": " + e.what());
        } catch (const json::exception& e) {
            throw dataset_error(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

}  // namespace qmine::jsonl
