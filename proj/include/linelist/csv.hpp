#pragma once

#include <string>
#include <vector>

namespace linelist::csv {

// RFC-4180 style row: comma delimiter, optional double-quoted fields,
// doubled quotes inside quoted fields, CRLF or LF row endings.
using Row = std::vector<std::string>;

struct ParseResult {
    std::vector<Row> rows;
    // Rows whose bytes could not be decoded as UTF-8 had the offending
    // bytes replaced with U+FFFD; their indices are listed here.
    std::vector<std::size_t> replaced_rows;
};

ParseResult parse(const std::string& text);
ParseResult parse_file(const std::string& path);

std::string escape_field(const std::string& field);
std::string write_row(const Row& row);
std::string write(const std::vector<Row>& rows);

}  // namespace linelist::csv
