#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qmine::csv {

// Fixed decimal formatting used for every CSV we emit, so identical runs
// produce byte-identical files.
std::string format_double(double v, int precision = 6);

std::string escape_field(std::string_view field);

class Writer {
public:
    explicit Writer(const std::string& path);
    ~Writer();

    Writer(const Writer&) = delete;
    Writer& operator=(const Writer&) = delete;

    void write_row(const std::vector<std::string>& fields);
    void close();

private:
    struct Impl;
    Impl* impl_;
};

// Minimal reader: splits a CSV file into rows of unquoted-or-quoted fields.
std::vector<std::vector<std::string>> read_file(const std::string& path);

}  // namespace qmine::csv
