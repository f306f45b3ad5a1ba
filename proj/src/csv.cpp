#include "linelist/csv.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace linelist::csv {

namespace {

// Replaces byte sequences that are not valid UTF-8 with U+FFFD.
// Returns true when a replacement happened.
bool sanitize_utf8(std::string& s) {
    static const std::string replacement = "\xEF\xBF\xBD";
    std::string out;
    bool replaced = false;
    std::size_t i = 0;
    const auto cont = [&](std::size_t k) {
        return i + k < s.size() && (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
    };
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        std::size_t len = 0;
        if (c < 0x80) len = 1;
        else if ((c & 0xE0) == 0xC0 && cont(1)) len = 2;
        else if ((c & 0xF0) == 0xE0 && cont(1) && cont(2)) len = 3;
        else if ((c & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3)) len = 4;
        if (len == 0) {
            out += replacement;
            replaced = true;
            ++i;
        } else {
            out.append(s, i, len);
            i += len;
        }
    }
    if (replaced) s = std::move(out);
    return replaced;
}

}  // namespace

ParseResult parse(const std::string& text) {
    ParseResult result;
    Row row;
    std::string field;
    bool in_quotes = false;
    bool row_has_content = false;

    const auto end_field = [&] {
        row.push_back(field);
        field.clear();
    };
    const auto end_row = [&] {
        end_field();
        result.rows.push_back(std::move(row));
        row.clear();
        row_has_content = false;
    };

    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            ++i;
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                row_has_content = true;
                ++i;
                break;
            case ',':
                end_field();
                row_has_content = true;
                ++i;
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
                end_row();
                ++i;
                break;
            case '\n':
                end_row();
                ++i;
                break;
            default:
                field += c;
                row_has_content = true;
                ++i;
                break;
        }
    }
    if (row_has_content || !field.empty() || !row.empty()) end_row();

    for (std::size_t r = 0; r < result.rows.size(); ++r) {
        bool replaced = false;
        for (auto& f : result.rows[r]) replaced |= sanitize_utf8(f);
        if (replaced) result.replaced_rows.push_back(r);
    }
    return result;
}

ParseResult parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open CSV file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string escape_field(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string write_row(const Row& row) {
    std::string out;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += escape_field(row[i]);
    }
    out += '\n';
    return out;
}

std::string write(const std::vector<Row>& rows) {
    std::string out;
    for (const auto& r : rows) out += write_row(r);
    return out;
}

}  // namespace linelist::csv
