#include "hubcast/csv.hpp"

#include <algorithm>
#include <stdexcept>

namespace hubcast {

std::size_t CsvTable::column(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw CsvError(1, "missing column \"" + name + "\"");
    return static_cast<std::size_t>(it - header.begin());
}

CsvTable parse_csv(const std::string& bytes) {
    CsvTable table;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t row_number = 1;

    auto end_field = [&]() {
        record.push_back(field);
        field.clear();
        field_started = false;
    };
    auto end_record = [&]() {
        end_field();
        // Skip records that are entirely empty (trailing newline).
        if (!(record.size() == 1 && record[0].empty())) {
            if (table.header.empty()) {
                table.header = record;
            } else {
                if (record.size() != table.header.size()) {
                    throw CsvError(row_number,
                                   "expected " + std::to_string(table.header.size()) +
                                       " fields, found " + std::to_string(record.size()));
                }
                table.rows.push_back(record);
            }
        }
        record.clear();
        ++row_number;
    };

    for (std::size_t i = 0; i < bytes.size(); ++i) {
        const char c = bytes[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < bytes.size() && bytes[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field.empty() && !field_started) {
                    in_quotes = true;
                    field_started = true;
                } else {
                    field += c;
                }
                break;
            case ',':
                end_field();
                break;
            case '\r':
                if (i + 1 < bytes.size() && bytes[i + 1] == '\n') break;  // CRLF
                [[fallthrough]];
            case '\n':
                end_record();
                break;
            default:
                field += c;
                field_started = true;
        }
    }
    if (in_quotes) throw CsvError(row_number, "unterminated quoted field");
    if (!field.empty() || !record.empty()) end_record();
    if (table.header.empty()) throw CsvError(0, "empty file");
    return table;
}

namespace {

bool needs_quoting(const std::string& field) {
    return field.find_first_of(",\"\n\r") != std::string::npos;
}

void append_field(std::string& out, const std::string& field) {
    if (!needs_quoting(field)) {
        out += field;
        return;
    }
    out += '"';
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

}  // namespace

std::string write_csv(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out += ',';
        append_field(out, header[i]);
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            append_field(out, row[i]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace hubcast
