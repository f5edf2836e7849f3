#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmsim {

// Shortest stable representation with 12 significant digits.
inline std::string format_double(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
        : out_(path) {
        if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
        bool first = true;
        for (const std::string& column : header) {
            if (!first) out_ << ',';
            out_ << column;
            first = false;
        }
        out_ << '\n';
    }

    template <typename... Cells>
    void row(const Cells&... cells) {
        bool first = true;
        (write_cell(cells, first), ...);
        out_ << '\n';
    }

private:
    void write_cell(double value, bool& first) { write_raw(format_double(value), first); }
    void write_cell(int value, bool& first) { write_raw(std::to_string(value), first); }
    void write_cell(long value, bool& first) { write_raw(std::to_string(value), first); }
    void write_cell(unsigned long value, bool& first) { write_raw(std::to_string(value), first); }
    void write_cell(const std::string& value, bool& first) { write_raw(value, first); }
    void write_cell(const char* value, bool& first) { write_raw(value, first); }

    void write_raw(const std::string& text, bool& first) {
        if (!first) out_ << ',';
        out_ << text;
        first = false;
    }

    std::ofstream out_;
};

}  // namespace pmsim
