#pragma once

#include <optional>
#include <string>
#include <vector>

namespace momentsense {

// Formats a value with 12 significant digits (the CSV contract asks for at
// least 10).
std::string csv_number(double value);

// Accumulates '#'-prefixed comment header lines plus comma-separated rows,
// then writes atomically (temp file + rename) so a failed run never leaves a
// partial output file behind.
class CsvWriter {
public:
    void comment(const std::string& line);          // one header line (no '#' needed)
    void comment_block(const std::string& text);    // multi-line text, '#' per line
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& cells);

    std::string str() const { return body_; }

    // Writes to `path` atomically; empty path writes to stdout. Throws
    // std::runtime_error on I/O failure.
    void write(const std::string& path) const;

private:
    std::string body_;
};

}  // namespace momentsense
