#pragma once

// Minimal CSV for the harness's own files: comma separated, no quoting.
// Writers reject fields containing separators, so every file we emit parses back.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace asbso::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name; throws ConfigError if absent.
    std::size_t column(std::string_view name) const;
};

/// Throws ConfigError if the field cannot be written unquoted.
void check_field(std::string_view field);

std::string format_row(const std::vector<std::string>& fields);
std::string format_table(const Table& table);

Table parse(std::string_view text);
/// Throws IoError when the file cannot be read, ConfigError on malformed content
/// or a header that differs from `expected_header` (when given).
Table read_file(const std::filesystem::path& path,
                const std::vector<std::string>& expected_header = {});
/// Throws IoError on failure.
void write_file(const std::filesystem::path& path, std::string_view content);

/// Round-trip formatting for doubles ("%.17g").
std::string format_double(double v);
double parse_double(std::string_view s);
unsigned long long parse_unsigned(std::string_view s);

} // namespace asbso::csv
