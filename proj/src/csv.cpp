#include "cryptofactor/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace cryptofactor {

CsvReader::CsvReader(const std::string& path) : path_(path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    buffer_ = ss.str();
}

bool CsvReader::next(std::vector<std::string>& fields) {
    fields.clear();
    if (pos_ >= buffer_.size()) return false;
    record_line_ = line_;
    std::string field;
    bool quoted = false;
    for (;;) {
        if (pos_ >= buffer_.size()) {
            if (quoted) throw CsvError(path_, record_line_, 1, "unterminated quoted field");
            fields.push_back(std::move(field));
            return true;
        }
        char c = buffer_[pos_++];
        if (quoted) {
            if (c == '"') {
                if (pos_ < buffer_.size() && buffer_[pos_] == '"') {
                    field.push_back('"');
                    ++pos_;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line_;
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\r') {
            if (pos_ < buffer_.size() && buffer_[pos_] == '\n') ++pos_;
            ++line_;
            fields.push_back(std::move(field));
            return true;
        } else if (c == '\n') {
            ++line_;
            fields.push_back(std::move(field));
            return true;
        } else {
            field.push_back(c);
        }
    }
}

CsvWriter::CsvWriter(const std::string& path) : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw std::runtime_error("cannot open file for writing: " + path);
}

namespace {
bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\r\n") != std::string::npos;
}
}  // namespace

void CsvWriter::row(std::span<const std::string> fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        const std::string& f = fields[i];
        if (needs_quoting(f)) {
            out_ << '"';
            for (char c : f) {
                if (c == '"') out_ << '"';
                out_ << c;
            }
            out_ << '"';
        } else {
            out_ << f;
        }
    }
    out_ << '\n';
    if (!out_) throw std::runtime_error("write failed: " + path_);
}

void CsvWriter::row(std::initializer_list<std::string> fields) {
    row(std::span<const std::string>(fields.begin(), fields.size()));
}

std::string format_double(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

double parse_double_field(const std::string& field, const std::string& file, std::size_t line,
                          std::size_t column) {
    if (field.empty()) return std::nan("");
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(field.c_str(), &end);
    if (end != field.c_str() + field.size() || errno == ERANGE)
        throw CsvError(file, line, column, "not a number: '" + field + "'");
    return v;
}

bool parse_bool_field(const std::string& field, const std::string& file, std::size_t line,
                      std::size_t column) {
    if (field == "1" || field == "true") return true;
    if (field == "0" || field == "false") return false;
    throw CsvError(file, line, column, "not a boolean: '" + field + "'");
}

}  // namespace cryptofactor
