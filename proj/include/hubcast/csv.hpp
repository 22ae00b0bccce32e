#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hubcast {

// Parse error with the 1-based row it came from (0 = whole file).
class CsvError : public std::runtime_error {
public:
    CsvError(std::size_t row, const std::string& message)
        : std::runtime_error(row == 0 ? message : "row " + std::to_string(row) + ": " + message),
          row_(row) {}
    std::size_t row() const { return row_; }

private:
    std::size_t row_;
};

// Minimal RFC-4180 table: first record is the header. Handles quoted fields,
// embedded quotes/commas/newlines, and both LF and CRLF input.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Column index by name; throws CsvError when missing.
    std::size_t column(const std::string& name) const;
};

CsvTable parse_csv(const std::string& bytes);

// Serialize with LF newlines, quoting only fields that need it.
std::string write_csv(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);

}  // namespace hubcast
