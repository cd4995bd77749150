#pragma once

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>

#include "miqos/errors.hpp"

namespace miqos {

/// Shortest decimal representation that round-trips the exact double.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// Comma-separated, LF-terminated rows; numeric cells use the shortest
/// round-trip representation so output is byte-deterministic.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : path_(path), out_(path, std::ios::binary) {
        if (!out_) throw IoError("cannot open for writing: " + path);
    }

    void text_row(std::initializer_list<std::string_view> cells) {
        bool first = true;
        for (const auto& cell : cells) {
            if (!first) out_ << ',';
            out_ << cell;
            first = false;
        }
        out_ << '\n';
    }

    void num_row(std::span<const double> cells) {
        bool first = true;
        for (double v : cells) {
            if (!first) out_ << ',';
            out_ << format_double(v);
            first = false;
        }
        out_ << '\n';
    }

    void close() {
        out_.flush();
        if (!out_) throw IoError("write failed: " + path_);
        out_.close();
    }

private:
    std::string path_;
    std::ofstream out_;
};

}  // namespace miqos
