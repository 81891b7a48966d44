#pragma once

// Report writers for the CLI: CSV with 17 significant digits, '.' decimal
// point, ',' separator and LF line endings, or JSON.  Reports are
// byte-stable across runs except for the optional timestamp line.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace fbmh::report {

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> cells) { rows.push_back(std::move(cells)); }
};

inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[40];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::string to_csv(const Table& table, bool with_timestamp) {
    std::string out;
    if (with_timestamp) out += "# generated " + timestamp_utc() + "\n";
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out += ',';
        out += table.header[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            if (std::holds_alternative<double>(row[i]))
                out += format_number(std::get<double>(row[i]));
            else if (std::holds_alternative<long long>(row[i]))
                out += std::to_string(std::get<long long>(row[i]));
            else
                out += std::get<std::string>(row[i]);
        }
        out += '\n';
    }
    return out;
}

inline nlohmann::json to_json_rows(const Table& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json obj;
        for (std::size_t i = 0; i < row.size() && i < table.header.size(); ++i) {
            if (std::holds_alternative<double>(row[i]))
                obj[table.header[i]] = std::get<double>(row[i]);
            else if (std::holds_alternative<long long>(row[i]))
                obj[table.header[i]] = std::get<long long>(row[i]);
            else
                obj[table.header[i]] = std::get<std::string>(row[i]);
        }
        rows.push_back(std::move(obj));
    }
    return rows;
}

// parse back what to_csv wrote; round-trips every cell
struct ParsedCsv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline ParsedCsv parse_csv(const std::string& text) {
    ParsedCsv p;
    std::size_t pos = 0;
    bool header_done = false;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        std::string line = text.substr(pos, nl - pos);
        pos = nl + 1;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::size_t c = 0;
        while (true) {
            std::size_t comma = line.find(',', c);
            if (comma == std::string::npos) {
                cells.push_back(line.substr(c));
                break;
            }
            cells.push_back(line.substr(c, comma - c));
            c = comma + 1;
        }
        if (!header_done) {
            p.header = std::move(cells);
            header_done = true;
        } else {
            p.rows.push_back(std::move(cells));
        }
    }
    return p;
}

inline void write_output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << text;
}

}  // namespace fbmh::report
