#pragma once

// Delimited output tables. Each file opens with "# schema: <name> v<N>", then
// a header row, then one row per record. Doubles use the shortest text that
// round-trips; fixed-point amounts are written as exact decimals.

#include "dfmm/error.hpp"
#include "dfmm/fixed.hpp"

#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace dfmm::io {

inline std::string fmt(double x) {
    std::array<char, 64> buf{};
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc{}) return "nan";
    return std::string(buf.data(), p);
}
inline std::string fmt(std::int64_t x) { return std::to_string(x); }
inline std::string fmt(std::uint64_t x) { return std::to_string(x); }
inline std::string fmt(int x) { return std::to_string(x); }
inline std::string fmt(bool b) { return b ? "1" : "0"; }
inline std::string fmt(const std::string& s) { return s; }
inline std::string fmt(const char* s) { return s; }
template <typename Tag>
std::string fmt(Fixed<Tag> f) {
    return f.to_string();
}

struct Table {
    std::string name;
    int schema_version = 1;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    template <typename... Ts>
    void add(const Ts&... values) {
        rows.push_back({fmt(values)...});
    }

    int column(std::string_view c) const {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i] == c) return static_cast<int>(i);
        }
        return -1;
    }

    std::string header_line() const { return "# schema: " + name + " v" + std::to_string(schema_version); }
};

inline std::string join(const std::vector<std::string>& cells, char sep = ',') {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += sep;
        out += cells[i];
    }
    return out;
}

inline std::vector<std::string> split(std::string_view line, char sep = ',') {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            return out;
        }
        out.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

inline std::string render(const Table& t) {
    std::string out = t.header_line() + "\n" + join(t.columns) + "\n";
    for (const auto& r : t.rows) out += join(r) + "\n";
    return out;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorCode::IoError, "cannot write " + path);
    f << content;
    if (!f) fail(ErrorCode::IoError, "write failed for " + path);
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(ErrorCode::IoError, "cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline Table read_table(const std::string& path) {
    std::istringstream in(read_file(path));
    Table t;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# schema: ", 0) != 0) {
        fail(ErrorCode::CorruptManifest, path + " has no schema line");
    }
    auto rest = line.substr(10);
    auto sp = rest.rfind(" v");
    if (sp == std::string::npos) fail(ErrorCode::CorruptManifest, path + " has a malformed schema line");
    t.name = rest.substr(0, sp);
    t.schema_version = std::stoi(rest.substr(sp + 2));
    if (!std::getline(in, line)) fail(ErrorCode::CorruptManifest, path + " has no header");
    t.columns = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        t.rows.push_back(split(line));
        if (t.rows.back().size() != t.columns.size()) fail(ErrorCode::CorruptManifest, path + " has a ragged row");
    }
    return t;
}

} // namespace dfmm::io
