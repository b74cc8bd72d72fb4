#include "asbso/csv.hpp"

#include "asbso/core.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace asbso::csv {

std::size_t Table::column(std::string_view name) const
{
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return i;
    throw ConfigError(fmt::format("csv: missing column '{}'", name));
}

void check_field(std::string_view field)
{
    if (field.find_first_of(",\"\r\n") != std::string_view::npos)
        throw ConfigError(fmt::format("csv: field '{}' contains a separator or quote", field));
}

std::string format_row(const std::vector<std::string>& fields)
{
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        check_field(fields[i]);
        if (i)
            out += ',';
        out += fields[i];
    }
    out += '\n';
    return out;
}

std::string format_table(const Table& table)
{
    std::string out = format_row(table.header);
    for (const auto& row : table.rows)
        out += format_row(row);
    return out;
}

Table parse(std::string_view text)
{
    Table table;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        ++line_no;
        if (line.empty())
            continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            fields.emplace_back(line.substr(start, comma - start));
            if (comma == std::string_view::npos)
                break;
            start = comma + 1;
        }
        if (table.header.empty()) {
            table.header = std::move(fields);
        } else {
            if (fields.size() != table.header.size())
                throw ConfigError(fmt::format("csv: line {} has {} fields, header has {}", line_no,
                                              fields.size(), table.header.size()));
            table.rows.push_back(std::move(fields));
        }
    }
    return table;
}

Table read_file(const std::filesystem::path& path, const std::vector<std::string>& expected_header)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
    std::stringstream buf;
    buf << in.rdbuf();
    auto table = parse(buf.str());
    if (!expected_header.empty() && table.header != expected_header)
        throw ConfigError(fmt::format("csv: '{}' has header '{}', expected '{}'", path.string(),
                                      fmt::join(table.header, ","),
                                      fmt::join(expected_header, ",")));
    return table;
}

void write_file(const std::filesystem::path& path, std::string_view content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw IoError(fmt::format("write to '{}' failed", path.string()));
}

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

double parse_double(std::string_view s)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError(fmt::format("csv: '{}' is not a number", s));
    return v;
}

unsigned long long parse_unsigned(std::string_view s)
{
    unsigned long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError(fmt::format("csv: '{}' is not a non-negative integer", s));
    return v;
}

} // namespace asbso::csv
