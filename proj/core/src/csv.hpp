#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace eeq::detail {

struct CsvRecord {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

/// RFC 4180 reader: quoted fields, doubled quotes, CRLF or LF line endings,
/// optional UTF-8 BOM. Blank lines are skipped. Throws MalformedCsv on an
/// unterminated quote or stray characters after a closing quote.
std::vector<CsvRecord> read_csv(std::string_view text);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

std::string escape_csv_field(std::string_view field);

}  // namespace eeq::detail
