#include "qmine/common/csv.hpp"

#include <cstdio>
#include <fstream>

#include "qmine/common/errors.hpp"

namespace qmine::csv {

std::string format_double(double v, int precision) {
    if (v == 0.0) v = 0.0;  // normalize negative zero
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return std::string(buf);
}

std::string escape_field(std::string_view field) {
    bool needs_quote = false;
    for (char c : field) {
        if (c == ',' || c == '"' || c == '\n' || c == '\r') {
            needs_quote = true;
            break;
        }
    }
    if (!needs_quote) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

struct Writer::Impl {
    std::ofstream stream;
    std::string path;
};

Writer::Writer(const std::string& path) : impl_(new Impl) {
    impl_->path = path;
    impl_->stream.open(path, std::ios::binary);
    if (!impl_->stream) {
        delete impl_;
        impl_ = nullptr;
        throw io_error("cannot open for writing: " + path);
    }
}

Writer::~Writer() {
    delete impl_;
}

void Writer::write_row(const std::vector<std::string>& fields) {
    std::string line;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) line.push_back(',');
        line += escape_field(fields[i]);
    }
    line.push_back('\n');
    impl_->stream.write(line.data(), static_cast<std::streamsize>(line.size()));
    if (!impl_->stream) throw io_error("write failed: " + impl_->path);
}

void Writer::close() {
    impl_->stream.close();
    if (impl_->stream.fail()) throw io_error("close failed: " + impl_->path);
}

std::vector<std::vector<std::string>> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open for reading: " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    size_t i = 0;
    auto end_field = [&]() {
        row.push_back(field);
        field.clear();
        field_started = false;
    };
    auto end_row = [&]() {
        end_field();
        rows.push_back(row);
        row.clear();
    };
    while (i < data.size()) {
        char c = data[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < data.size() && data[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty() && !field_started) {
            in_quotes = true;
            field_started = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\n') {
            end_row();
        } else if (c == '\r') {
            // swallow; \r\n handled by the \n branch
        } else {
            field.push_back(c);
            field_started = true;
        }
        ++i;
    }
    if (field_started || !row.empty() || in_quotes) end_row();
    return rows;
}

}  // namespace qmine::csv
