#pragma once

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

namespace siwave {

/// 17 significant digits: lossless double round-trip, deterministic output.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Split a comma-separated list (no quoting; our files never need it).
std::vector<std::string> split_csv_line(const std::string& line);

/// Parse "a,b,c" into doubles.
std::vector<double> parse_double_list(const std::string& text);

void write_text_file(const std::filesystem::path& file, const std::string& content);
std::string read_text_file(const std::filesystem::path& file);

/// FNV-1a over the canonicalized config text; stable across platforms.
std::uint64_t fnv1a_hash(const std::string& text);

}  // namespace siwave
