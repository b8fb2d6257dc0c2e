#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "common.hpp"

namespace modcyl {

/// Shortest round-trip decimal representation; locale-independent, so equal
/// inputs give byte-identical output files.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

/// Write a file atomically: temp file in the same directory, then rename.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) throw std::runtime_error("rename failed: " + path.string() + ": " + ec.message());
}

/// Row of the kernel evaluation schema: component indices are 1-based in the
/// files; part is one of smooth | pv | delta | delta_prime | mirror | local.
struct KernelRow {
    int a = 1, b = 1;
    double x = 0.0, y = 0.0;
    std::string part;
    complex value;
};

inline std::string kernel_rows_csv(const std::vector<KernelRow>& rows) {
    std::string out = "a,b,x,y,part,re,im\n";
    for (const auto& r : rows) {
        out += std::to_string(r.a);
        out += ',';
        out += std::to_string(r.b);
        out += ',';
        out += format_double(r.x);
        out += ',';
        out += format_double(r.y);
        out += ',';
        out += r.part;
        out += ',';
        out += format_double(r.value.real());
        out += ',';
        out += format_double(r.value.imag());
        out += '\n';
    }
    return out;
}

}  // namespace modcyl
