#include "ordersens/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ordersens/error.hpp"

namespace ordersens::csv {

std::vector<Row> parse(std::string_view text) {
    std::vector<Row> rows;
    Row row;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        if (field_started || !row.empty()) {
            end_field();
            bool blank = row.size() == 1 && row[0].empty();
            if (!blank) rows.push_back(std::move(row));
        }
        row.clear();
    };
    for (std::size_t k = 0; k < text.size(); ++k) {
        const char c = text[k];
        if (quoted) {
            if (c == '"') {
                if (k + 1 < text.size() && text[k + 1] == '"') {
                    field += '"';
                    ++k;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                quoted = true;
                field_started = true;
                break;
            case ',':
                end_field();
                field_started = true;
                break;
            case '\r':
                break;
            case '\n':
                end_row();
                break;
            default:
                field += c;
                field_started = true;
        }
    }
    if (quoted) throw InputError("unterminated quoted CSV field");
    end_row();
    return rows;
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string join(const Row& row) {
    std::string out;
    for (std::size_t k = 0; k < row.size(); ++k) {
        if (k) out += ',';
        out += escape(row[k]);
    }
    return out;
}

std::string format_number(double x) {
    if (x == 0.0) return "0";  // folds -0
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return std::string(buf, ptr);
}

double parse_number(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw InputError("malformed number '" + std::string(text) + "'");
    return x;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << content;
}

}  // namespace ordersens::csv
