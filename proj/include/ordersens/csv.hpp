#ifndef ORDERSENS_CSV_HPP
#define ORDERSENS_CSV_HPP

#include <string>
#include <string_view>
#include <vector>

namespace ordersens::csv {

using Row = std::vector<std::string>;

/// RFC-4180-style reader: quoted fields, doubled quotes, CRLF or LF. Blank
/// lines are skipped.
std::vector<Row> parse(std::string_view text);

/// Quotes a field when it contains a comma, quote or newline.
std::string escape(std::string_view field);

std::string join(const Row& row);

/// Shortest decimal form that round-trips exactly.
std::string format_number(double x);
/// Throws InputError on anything but a complete decimal number.
double parse_number(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace ordersens::csv

#endif
