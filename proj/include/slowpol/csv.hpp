#ifndef SLOWPOL_CSV_HPP
#define SLOWPOL_CSV_HPP

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include "slowpol/errors.hpp"

namespace slowpol {

// 17 significant digits round-trip a double exactly, so identical configs
// yield byte-identical files and golden-file tests are stable.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::string_view header)
        : out_(path, std::ios::binary) {
        if (!out_)
            throw Error("cannot open output file " + path.string());
        out_ << "# schema=1\n" << header << "\n";
    }

    template <typename... Fields>
    void row(const Fields&... fields) {
        bool first = true;
        ((write_field(fields, first), first = false), ...);
        out_ << "\n";
    }

private:
    void write_field(double v, bool first) {
        if (!first) out_ << ",";
        out_ << format_double(v);
    }
    void write_field(int v, bool first) {
        if (!first) out_ << ",";
        out_ << v;
    }
    void write_field(std::string_view v, bool first) {
        if (!first) out_ << ",";
        out_ << v;
    }
    void write_field(const char* v, bool first) {
        write_field(std::string_view(v), first);
    }

    std::ofstream out_;
};

} // namespace slowpol

#endif // SLOWPOL_CSV_HPP
