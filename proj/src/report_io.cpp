#include "urlab/report_io.hpp"

#include <charconv>
#include <fstream>

namespace urlab::cli {

void Table::add_row(std::vector<Cell> cells) {
    if (cells.size() != columns.size())
        throw Error(ErrorCode::AssertionFailure, "row width does not match header");
    rows.push_back(std::move(cells));
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                   std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string cell_to_csv(const Cell& cell) {
    struct Visitor {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(double v) const { return format_double(v); }
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(bool v) const { return v ? "1" : "0"; }
        std::string operator()(const std::string& v) const { return csv_escape(v); }
    };
    return std::visit(Visitor{}, cell);
}

nlohmann::json cell_to_json(const Cell& cell) {
    struct Visitor {
        nlohmann::json operator()(std::monostate) const { return nullptr; }
        nlohmann::json operator()(double v) const { return v; }
        nlohmann::json operator()(long long v) const { return v; }
        nlohmann::json operator()(bool v) const { return v; }
        nlohmann::json operator()(const std::string& v) const { return v; }
    };
    return std::visit(Visitor{}, cell);
}

} // namespace

std::string render_csv(const Table& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c > 0)
            out += ',';
        out += csv_escape(table.columns[c]);
    }
    out += '\n';
    for (const std::vector<Cell>& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0)
                out += ',';
            out += cell_to_csv(row[c]);
        }
        out += '\n';
    }
    return out;
}

nlohmann::json render_json(const Table& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const std::vector<Cell>& row : table.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t c = 0; c < row.size(); ++c)
            obj[table.columns[c]] = cell_to_json(row[c]);
        rows.push_back(std::move(obj));
    }
    return rows;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::ConfigValidate, "cannot open output file " + path);
    out << content;
    if (!out)
        throw Error(ErrorCode::ConfigValidate, "write failed for " + path);
}

} // namespace urlab::cli
