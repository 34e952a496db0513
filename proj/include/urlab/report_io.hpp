// report_io.hpp
// Typed result tables and their deterministic renderings: CSV with
// 17-significant-digit round-trip doubles, or JSON rows.

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "urlab/errors.hpp"

namespace urlab::cli {

using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> cells);
};

std::string format_double(double value); // round-trip text, '.' decimal

std::string render_csv(const Table& table);
nlohmann::json render_json(const Table& table); // array of row objects

void write_text_file(const std::string& path, const std::string& content);

inline Cell cell(std::optional<double> v) {
    return v ? Cell(*v) : Cell(std::monostate{});
}

} // namespace urlab::cli
