#pragma once

#include <cstddef>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cryptofactor {

/// Error raised on malformed CSV input. The message names file, line and
/// column so callers can report exact positions.
class CsvError : public std::runtime_error {
public:
    CsvError(const std::string& file, std::size_t line, std::size_t column,
             const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ":" + std::to_string(column) +
                             ": " + what),
          file_(file), line_(line), column_(column) {}

    const std::string& file() const { return file_; }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::string file_;
    std::size_t line_;
    std::size_t column_;
};

/// RFC-4180 CSV reader: quoted fields, embedded commas/quotes/newlines, CRLF.
class CsvReader {
public:
    explicit CsvReader(const std::string& path);

    /// Reads the next record into `fields`. Returns false at end of input.
    bool next(std::vector<std::string>& fields);

    std::size_t line() const { return record_line_; }
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::string buffer_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t record_line_ = 1;
};

/// CSV writer with RFC-4180 quoting, LF line endings.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);

    void row(std::span<const std::string> fields);
    void row(std::initializer_list<std::string> fields);

private:
    std::ofstream out_;
    std::string path_;
};

/// Canonical number formatting used in every output table ("%.12g").
std::string format_double(double v);

/// Parses a double, raising CsvError with position info on failure.
/// An empty field yields NaN (absent value).
double parse_double_field(const std::string& field, const std::string& file, std::size_t line,
                          std::size_t column);

bool parse_bool_field(const std::string& field, const std::string& file, std::size_t line,
                      std::size_t column);

}  // namespace cryptofactor
